#include <crc/validation.hpp>

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
  unsigned long long seed = 1;
  int threads = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      seed = std::stoull(argv[++i]);
    } else if (arg == "--threads" && i + 1 < argc) {
      threads = std::stoi(argv[++i]);
    }
  }
  const auto results = crc::run_all_criteria(seed, threads);
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%s\n", crc::format_criterion(r).c_str());
    std::fflush(stdout);
    all_pass = all_pass && r.pass;
  }
  std::printf(all_pass ? "ALL CRITERIA PASS\n" : "CRITERIA FAILED\n");
  return all_pass ? 0 : 1;
}
