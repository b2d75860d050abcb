#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tautring/quotient.hpp"

namespace tautring {

struct EngineInfo {
  std::string version;
  std::uint64_t primes_seed = 0;
  std::string nu_policy;
  std::string linalg;                 // "exact" or "modular"
  std::vector<std::uint64_t> primes;  // primes whose results agreed
};

struct AnalysisReport {
  DimensionTable table;
  std::optional<PairingReport> pairing;  // present once the socle codim is reached
  EngineInfo engine;
};

struct SympowReport {
  int genus = 0;
  int n = 0;
  std::vector<std::size_t> dims;  // by degree 0..g-1+n
  int socle_degree = 0;
  std::size_t socle_dim = 0;
  TransferReport transfer;
  PairingReport ttilde;
  EngineInfo engine;
};

// Reports carry no timings or host data, so equal inputs give equal bytes.
std::string report_json(const AnalysisReport& r);
std::string report_csv(const DimensionTable& t);
std::string report_text(const AnalysisReport& r);

std::string sympow_json(const SympowReport& r);
std::string sympow_csv(const SympowReport& r);
std::string sympow_text(const SympowReport& r);

}  // namespace tautring
