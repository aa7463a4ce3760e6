// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

// JSON conversions shared by io.cpp and report.cpp. Not installed.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbayes/channel.hpp"

namespace qbayes::detail {

nlohmann::json parse_json(std::string_view text);
[[noreturn]] void schema_error(const std::string& path, const std::string& what);
const nlohmann::json& field(const nlohmann::json& obj, const std::string& key, const std::string& path);

MultiMatrixAlgebra to_algebra(const nlohmann::json& v, const std::string& path);
nlohmann::json from_algebra(const MultiMatrixAlgebra& a);
CMatrix to_matrix(const nlohmann::json& v, const std::string& path);
nlohmann::json from_matrix(const CMatrix& m);
nlohmann::json from_channel(const Channel& f);
Channel to_channel(const nlohmann::json& v, const std::string& path);

}  // namespace qbayes::detail
