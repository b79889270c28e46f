#pragma once

#include "report.hpp"

#include <fstream>
#include <sstream>

namespace testing {

inline std::string read_benchmark(const std::string& name) {
  std::string path = std::string(DYNRED_BENCH_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing benchmark " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline dynred::lang::Program parse_benchmark(const std::string& name) {
  return dynred::lang::parse_program(read_benchmark(name));
}

inline std::unique_ptr<dynred::Pipeline> pipeline_for(const std::string& text) {
  using namespace dynred;
  return std::make_unique<Pipeline>(lang::lower_sugar(lang::parse_program(text)));
}

inline std::unique_ptr<dynred::Pipeline> pipeline_for_benchmark(const std::string& name) {
  return pipeline_for(read_benchmark(name));
}

inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> files = {
      "fig1.prog", "fig2.prog",         "fig3.prog",       "fig4.prog",    "fig5_inserts.prog",
      "fig5_lookups.prog", "fig5_mixed.prog", "fig6.prog", "dynlock.prog",
  };
  return files;
}

} // namespace testing
