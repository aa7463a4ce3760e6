// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <algorithm>

#include "qbayes/linalg.hpp"

namespace qbayes {

// A yes/no answer together with the residual that decided it.
struct Verdict {
  bool holds = true;
  double residual = 0.0;
  double scale = 0.0;

  explicit operator bool() const noexcept { return holds; }
};

// Running maximum of residuals and of the magnitudes they are measured against.
class ResidualMax {
 public:
  void add(double residual, double scale) noexcept {
    residual_ = std::max(residual_, residual);
    scale_ = std::max(scale_, scale);
  }
  double residual() const noexcept { return residual_; }
  double scale() const noexcept { return scale_; }
  Verdict verdict(const Tolerances& tol) const noexcept {
    return Verdict{within(residual_, scale_, tol), residual_, scale_};
  }

 private:
  double residual_ = 0.0;
  double scale_ = 0.0;
};

}  // namespace qbayes
