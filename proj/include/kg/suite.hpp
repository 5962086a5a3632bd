#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kg/constants.hpp"

namespace kg {

inline constexpr const char* kToolkitVersion = "1.0.0";

struct CheckRecord {
  std::string name;
  std::string claim;  // stable id from the claim registry (see README)
  int criterion = 0;  // acceptance criterion this record feeds, 0 = supporting
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::string version = kToolkitVersion;
  double wall_seconds = 0.0;
  std::vector<CheckRecord> records;

  int passed() const;
  int failed() const;
  void add(CheckRecord rec);
};

// Regression constants: a flat key -> value JSON file. Checks pass while the
// measured value stays within 1.1x the pinned calibration value.
class Pins {
 public:
  static Pins load(const std::string& path);  // missing file -> empty set
  void save(const std::string& path) const;

  bool has(const std::string& key) const;
  double get(const std::string& key) const;
  void set(const std::string& key, double value);
  bool dirty() const { return dirty_; }

  CheckRecord check_max(const std::string& name, const std::string& claim, int criterion,
                        const std::string& key, double value, bool update);

 private:
  std::map<std::string, double> values_;
  bool dirty_ = false;
};

struct ExperimentConfig {
  std::string suite = "all";
  std::uint64_t seed = 20260817;
  GehringParams params;  // constants / localization reference parameters

  // geometry
  int group_samples = 10000;
  int volume_cases = 1000;
  // covering
  int vitali_families = 200;
  int vitali_max_cylinders = 50;
  int vitali_samples_per_family = 100000;
  int kernel_pairs = 10000;
  // localization
  int zeta_triples = 100000;
  int inclusion_pairs = 10000;
  int localization_resolution = 96;
  int localization_cylinders = 64;
  // layer cake
  int levels = 512;
  int layercake_resolution = 64;
  // solver
  int kolmogorov_resolution = 128;
  double kolmogorov_time = 0.5;
  int mms_base = 32;  // refinements base, 2x, 4x
  // ensemble
  int ensemble_members = 50;
  int ensemble_resolution = 48;  // grid (n, 4n, n)
  double ensemble_gamma = 1.5;
  int refine_members = 20;
  int refine_lo = 64;
  int refine_hi = 96;
  double eps_observed = 0.01;
  // reverse Holder / end-to-end
  int scan_cylinders = 500;
  // divergence / oscillation checks
  int bogovskii_resolution = 64;
  int bogovskii_sources = 10;
  int poincare_resolution = 64;

  std::string pins_path = "data/pins.json";
  bool update_pins = false;
  std::string out_dir;
};

ExperimentConfig load_config(const std::string& path);
std::string config_json(const ExperimentConfig& cfg);

std::string report_json(const SuiteReport& rep);
std::string report_csv(const SuiteReport& rep);
// Writes report.json and report.csv under out_dir (created if needed).
void write_report(const SuiteReport& rep, const std::string& out_dir);

std::string constants_json(const ConstantsReport& rep);

// Runs the suite named by cfg.suite: geometry | covering | localization |
// layercake | constants | solver | gehring | all.
SuiteReport run_suite(const ExperimentConfig& cfg);

}  // namespace kg
