// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbayes/error.hpp"
#include "qbayes/io.hpp"

namespace qbayes {

inline constexpr std::string_view kVersion = "0.1.0";

const std::vector<std::string>& all_analyses();

// Runs `analyses` (or the problem's own list, or everything) and returns the
// report as JSON text. InternalInconsistency and ExtensionFailure propagate.
std::string run_check(const Problem& problem, const std::vector<std::string>& analyses = {}, bool pretty = false);

enum class InvertMode { Bayes, Disint };

struct InvertOutcome {
  std::string report;
  std::optional<Channel> result;  // set when the inverse or disintegration exists
};

InvertOutcome run_invert(const Problem& problem, InvertMode mode, bool pretty = false);

// Re-verifies a previously written channel against the problem.
std::string run_verify(const Problem& problem, const Channel& g, InvertMode mode, bool pretty = false);

enum class RandomKind { Product, NonProduct, RankDeficient, Kraus, Hom };

std::optional<RandomKind> parse_random_kind(std::string_view name);

Problem random_problem(RandomKind kind, const std::vector<std::size_t>& source_dims,
                       const std::vector<std::size_t>& target_dims, std::uint64_t seed,
                       const Tolerances& tol = Tolerances::from_env());

// 0 ran, 2 input error, 3 internal inconsistency, 1 anything else.
int exit_code(const Error& e) noexcept;

}  // namespace qbayes
