// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbayes {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  NegativeEigenvalue,
  DimensionMismatch,
  ShapeMismatch,
  NotCP,
  InvalidCertificate,
  ExtensionFailure,
  InternalInconsistency,
  ParseError,
  SchemaError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

  // Input errors are the caller's fault; everything else is ours.
  bool is_input_error() const noexcept;

 private:
  ErrorKind kind_;
};

}  // namespace qbayes
