#pragma once

// Run configuration shared by the command line tool and the acceptance suite.

#include <cstdint>
#include <string>

#include "hystreal/flow.hpp"
#include "hystreal/schedule.hpp"
#include "hystreal/verify.hpp"

namespace hystreal {

struct Config {
  BuildOptions build;
  SweepConfig sweep;
  VerifyConfig verify;  // verify.sweep mirrors sweep
  Lemma1Config lemma1;  // lemma1.sweep mirrors sweep
  SecondOrderConfig second_order;
  std::uint64_t seed = 20240601;
  int random_graphs = 20;
  int random_max_top = 3;
  int random_max_size = 4;
  int oracle_max_N = 6;
  int preisach_max_N = 12;
};

/// Throws DomainError naming the first non-positive tolerance or out-of-range count.
void validate_config(const Config& c);

/// Copies the shared sweep settings into the nested configs.
void sync_config(Config& c);

std::string config_to_json(const Config& c);
/// Keys absent from the document keep their defaults; unknown keys are rejected.
Config config_from_json(const std::string& text);
Config load_config(const std::string& path);

}  // namespace hystreal
