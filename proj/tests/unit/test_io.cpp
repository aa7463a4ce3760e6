// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#include "doctest.h"
#include "instances.hpp"
#include "qbayes/disint.hpp"
#include "qbayes/error.hpp"
#include "qbayes/io.hpp"
#include "qbayes/report.hpp"

using namespace qbayes;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    (void)parse_problem(text, Tolerances{});
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

std::string message_of(const std::string& text) {
  try {
    (void)parse_problem(text, Tolerances{});
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const std::string kChannel =
    R"("channel":{"source":{"blocks":[2]},"target":{"blocks":[4]},"kind":"hom","mult":[[2]]})";

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("fixtures round-trip through serialisation") {
    for (const auto& path : qbayes::testing::fixture_paths()) {
      CAPTURE(path);
      const Problem p = parse_problem(read_file(path), Tolerances{});
      const std::string once = serialize_problem(p);
      const std::string twice = serialize_problem(parse_problem(once, Tolerances{}));
      CHECK(once == twice);
    }
  }

  TEST_CASE("errors carry positions and field names") {
    CHECK(kind_of("{\"channel\": ") == ErrorKind::ParseError);
    CHECK(message_of("{\n\n  \"channel\": ]").find("line 3") != std::string::npos);
    CHECK(kind_of("{" + kChannel + "}") == ErrorKind::SchemaError);
    CHECK(message_of("{" + kChannel + "}").find("state") != std::string::npos);
    const std::string bad_mult =
        R"({"channel":{"source":{"blocks":[2]},"target":{"blocks":[4]},"kind":"hom","mult":[[3]]},)"
        R"("state":{"weights":[1],"densities":[{"data":[1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}]}})";
    CHECK(message_of(bad_mult).find("channel.mult") != std::string::npos);
    const std::string bad_kind = R"({"channel":{"source":{"blocks":[2]},"target":{"blocks":[2]},"kind":"x"}})";
    CHECK(message_of(bad_kind).find("channel.kind") != std::string::npos);
    const std::string bad_analysis = "{" + kChannel +
                                     R"(,"state":{"weights":[1],"densities":[{"data":[1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}]},)"
                                     R"("analyses":["ac","nope"]})";
    CHECK(message_of(bad_analysis).find("analyses[1]") != std::string::npos);
  }

  TEST_CASE("channel files round-trip exactly") {
    Rng rng(81);
    const Channel f = random_ucp(rng, MultiMatrixAlgebra({2, 1}), MultiMatrixAlgebra({3}), 2);
    const Channel g = parse_channel(serialize_channel(f));
    CHECK(g.choi_grid() == f.choi_grid());
  }

  TEST_CASE("reports are deterministic apart from timing") {
    const Problem p = parse_problem(read_file(std::string(QBAYES_FIXTURE_DIR) + "/multiblock.json"), Tolerances{});
    CHECK(strip_timing(run_check(p)) == strip_timing(run_check(p)));
    CHECK(run_check(p).find("timing_ms") != std::string::npos);
    CHECK(strip_timing(run_check(p)).find("timing_ms") == std::string::npos);
  }

  TEST_CASE("random problems honour their kind") {
    const Tolerances tol;
    const Problem prod = random_problem(RandomKind::Product, {2}, {4}, 42, tol);
    CHECK(factorize(*prod.hom, prod.state).valid);
    CHECK(serialize_problem(prod) == serialize_problem(random_problem(RandomKind::Product, {2}, {4}, 42, tol)));
    const Problem nonprod = random_problem(RandomKind::NonProduct, {2}, {4}, 42, tol);
    CHECK(is_faithful(nonprod.state));
    CHECK(!factorize(*nonprod.hom, nonprod.state).valid);
    const Problem rd = random_problem(RandomKind::RankDeficient, {1, 2}, {3, 2}, 7, tol);
    CHECK(!is_faithful(rd.state));
    const Problem kr = random_problem(RandomKind::Kraus, {2}, {3}, 9, tol);
    CHECK(kr.kind == ChannelKind::Kraus);
    CHECK(is_ucp(kr.channel).ucp());
    CHECK_THROWS_AS(random_problem(RandomKind::Product, {2}, {3}, 1, tol), Error);
  }

  TEST_CASE("exit codes") {
    CHECK(exit_code(Error(ErrorKind::ParseError, "x")) == 2);
    CHECK(exit_code(Error(ErrorKind::SchemaError, "x")) == 2);
    CHECK(exit_code(Error(ErrorKind::InternalInconsistency, "x")) == 3);
    CHECK(exit_code(Error(ErrorKind::ExtensionFailure, "x")) == 3);
  }
}
