// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/diophantine.hpp"
#include "hypo/system.hpp"
#include "hypo/witness.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypo {

struct ClassifyBounds {
  long tau_max = 64;                // zero-set box in tau
  std::size_t j_max = 64;           // zero-set box in j and witness modes
  std::size_t L_max = 1000;         // Diophantine box
  std::vector<double> sigma_grid;   // empty: {M mu, 2 M mu, 4 M mu}
  std::vector<double> eps_grid;     // empty: {1e-3, 1e-2, 1e-1}
  bool build_witness = true;
};

enum class Outcome { GH, NotGH, UndeterminedAtBounds };
const char* to_string(Outcome o);

enum class CertificateKind { None, ConditionI, ConditionII, InfiniteZeroSet, DiophantineFailure, SingularWitness };
const char* to_string(CertificateKind k);

struct SigmaCheck {
  double sigma = 0;
  DiophantineReport report;
};

struct Verdict {
  Outcome outcome = Outcome::UndeterminedAtBounds;
  CertificateKind certificate = CertificateKind::None;
  int condition_i_index = -1;           // 0-based equation index for ConditionI
  std::vector<SignProfile> profiles;    // per equation
  std::vector<int> J_set;               // equations with b == 0
  std::vector<SigmaCheck> diophantine;  // condition (II) scans
  std::optional<ZeroSetReport> zero_set;
  std::optional<SingularWitness> witness;
  std::vector<std::string> notes;
  ClassifyBounds bounds;
};

struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> condition_sigma_grid(const SystemSpec& spec, const ClassifyBounds& bounds);

Verdict classify(const SystemSpec& spec, const ClassifyBounds& bounds = {});

// The one-equation criterion on equation r; a GH verdict here settles the system.
std::optional<Verdict> single_equation_rule(const SystemSpec& spec, int r, const ClassifyBounds& bounds = {});

// Classifies spec and its normal form; throws ConsistencyError if they differ.
Verdict reduce_and_classify(const SystemSpec& spec, const ClassifyBounds& bounds = {});

struct RecheckReport {
  bool ok = true;
  std::vector<std::string> failures;
};

// Re-verifies the certificate independently (condition (II) on a box twice as large).
RecheckReport recheck(const SystemSpec& spec, const Verdict& v);

}  // namespace hypo
