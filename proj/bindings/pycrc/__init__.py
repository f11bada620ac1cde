"""Joint radar/communication coexistence design."""

from _pycrc import (  # noqa: F401
    CodesignResult,
    ScenarioInstance,
    SystemDims,
    avg_rate,
    default_scenario_json,
    initial_precoder,
    mi_via_lemma1,
    papr,
    radar_sinr,
    reference_waveform,
    run_codesign,
    sample_scenario,
    update_receive_filter,
)

__all__ = [
    "CodesignResult",
    "ScenarioInstance",
    "SystemDims",
    "avg_rate",
    "default_scenario_json",
    "initial_precoder",
    "mi_via_lemma1",
    "papr",
    "radar_sinr",
    "reference_waveform",
    "run_codesign",
    "sample_scenario",
    "update_receive_filter",
]
