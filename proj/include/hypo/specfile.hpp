// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/system.hpp"

#include <string>

namespace hypo {

// TOML system description:
//   [system]    m, mu
//   [operator]  kind = "harmonic_oscillator" | "table" | "formula", n, M, rho,
//               csv or values (table), name = "power" | "double_exponential",
//               coef, power, length (formula)
//   [[equation]] a, b: number, "p/q", [[freq, cos, sin], ...] or
//               { const = ..., terms = [[freq, cos, sin], ...] }
// Relative csv paths resolve against base_dir. Errors carry line:column.
SystemSpec parse_spec(const std::string& text, const std::string& name = "<string>", const std::string& base_dir = ".");
SystemSpec load_spec(const std::string& path);

std::string read_file(const std::string& path);

// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string content_hash(const std::string& bytes);

}  // namespace hypo
