// Reproducible experiment driver. A Scenario is a JSON document with a
// schema version, problem parameters, grid specification, a task name, task
// options, a seed, and an output directory; run() dispatches the task and
// writes reports (JSON), profiles/trajectories (CSV), and a manifest with a
// config hash, library versions, and timings. Identical scenarios with
// identical seeds produce byte-identical result files; wall-clock data is
// quarantined in the manifest.
#pragma once

#include "nsol/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nsol {

struct Scenario {
  // Parsed, validated form is kept as canonical JSON text.
  std::string json;

  static Scenario from_json_text(const std::string &text);
  static Scenario from_file(const std::string &path);
  static Scenario defaults(const std::string &task);

  // Applies a dotted-path override, e.g. set("prm.a", "0.4").
  void set(const std::string &dotted_key, const std::string &value);

  std::string task() const;
  std::string output_dir() const;
  std::uint64_t seed() const;

  // Runs the task, writes all outputs under output_dir (created if needed),
  // and returns the result report as JSON text. Errors propagate as the
  // typed exceptions from errors.hpp.
  std::string run() const;
};

// FNV-1a 64-bit hash of a byte string, hex-encoded (config hash, output hash).
std::string fnv1a_hex(const std::string &bytes);

} // namespace nsol
