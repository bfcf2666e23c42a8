// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/classify.hpp"
#include "hypo/solver.hpp"

#include <json.hpp>

#include <string>

namespace hypo {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

Json to_json(const SignProfile& p);
Json to_json(const DiophantineReport& r);
Json to_json(const ZeroSetReport& r);
Json to_json(const DecayProfile& p);
Json to_json(const WitnessVerification& v);
// embed_fields adds u and f as CSV strings
Json to_json(const SingularWitness& w, bool embed_fields = false);
Json to_json(const ClassifyBounds& b);
Json to_json(const Verdict& v, bool embed_fields = false);
Json to_json(const std::vector<ResonanceRow>& rows);
Json describe_spec(const SystemSpec& spec);

// Shortest text that reads back to x with 17 significant digits at most;
// "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);

// Deterministic serializer: fixed key order, floats through format_double,
// non-finite floats as strings, two-space indent.
std::string dump_json(const Json& j);

std::string field_csv(const CoefficientField& field);
std::string resonance_csv(const std::vector<ResonanceRow>& rows, int m);

}  // namespace hypo
