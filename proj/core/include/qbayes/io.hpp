// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbayes/channel.hpp"
#include "qbayes/state.hpp"

namespace qbayes {

enum class ChannelKind { Hom, Choi, Kraus };

std::string_view to_string(ChannelKind kind) noexcept;

// A parsed problem file. The channel is always materialised; hom and kraus
// keep the form it was given in so that serialisation round-trips.
struct Problem {
  ChannelKind kind = ChannelKind::Choi;
  Channel channel;
  std::optional<HomSpec> hom;
  std::vector<KrausOperator> kraus;
  State state;
  Tolerances tolerances;
  std::vector<std::string> analyses;  // empty means "all"
  std::string meta = "{}";            // canonical JSON text
};

inline constexpr std::string_view kProblemSchema = "qbayes.problem/1";
inline constexpr std::string_view kChannelSchema = "qbayes.channel/1";
inline constexpr std::string_view kReportSchema = "qbayes.report/1";

// Tolerance fields missing from the file fall back to `defaults`.
Problem parse_problem(std::string_view text, const Tolerances& defaults = Tolerances::from_env());
std::string serialize_problem(const Problem& problem, bool pretty = false);

Channel parse_channel(std::string_view text);
std::string serialize_channel(const Channel& channel, bool pretty = false);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Drops every "timing_ms" member, for comparing reports.
std::string strip_timing(std::string_view report_json);

}  // namespace qbayes
