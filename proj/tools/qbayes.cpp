// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qbayes/error.hpp"
#include "qbayes/io.hpp"
#include "qbayes/report.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> dims;
  for (const auto& tok : split(s, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || v == 0) {
      throw qbayes::Error(qbayes::ErrorKind::InvalidArgument, "bad block size \"" + tok + "\" in --dims");
    }
    dims.push_back(v);
  }
  if (dims.empty()) throw qbayes::Error(qbayes::ErrorKind::InvalidArgument, "empty shape in --dims");
  return dims;
}

qbayes::InvertMode parse_mode(const std::string& s) {
  return s == "bayes" ? qbayes::InvertMode::Bayes : qbayes::InvertMode::Disint;
}

qbayes::Problem load(const std::string& path, std::optional<double> eps_eq, std::optional<double> eps_rank) {
  qbayes::Problem p = qbayes::parse_problem(qbayes::read_file(path));
  if (eps_eq) p.tolerances.eps_eq = *eps_eq;
  if (eps_rank) p.tolerances.eps_rank = *eps_rank;
  p.tolerances.validate();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inverses and disintegrations for finite-dimensional quantum channels", "qbayes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qbayes::kVersion));

  std::string file, channel_file, analyses, mode = "bayes", out, dims, kind = "hom";
  std::optional<double> eps_eq, eps_rank;
  std::uint64_t seed = 0;
  bool pretty = false;

  auto* check = app.add_subcommand("check", "Run analyses on a problem file and print a report");
  check->add_option("file", file, "Problem JSON")->required();
  check->add_option("--analyses", analyses, "Comma-separated subset of analyses");
  check->add_option("--eps-eq", eps_eq, "Equality tolerance");
  check->add_option("--eps-rank", eps_rank, "Relative rank cutoff");
  auto* json_flag = check->add_flag("--json", "Compact JSON output (default)");
  check->add_flag("--pretty", pretty, "Indented JSON output")->excludes(json_flag);

  auto* invert = app.add_subcommand("invert", "Construct a Bayesian inverse or disintegration");
  invert->add_option("file", file, "Problem JSON")->required();
  invert->add_option("--mode", mode, "bayes or disint")->check(CLI::IsMember({"bayes", "disint"}));
  invert->add_option("--out", out, "Where to write the constructed channel")->required();
  invert->add_option("--eps-eq", eps_eq, "Equality tolerance");
  invert->add_option("--eps-rank", eps_rank, "Relative rank cutoff");
  invert->add_flag("--pretty", pretty, "Indented JSON output");

  auto* verify = app.add_subcommand("verify", "Re-verify a written channel against a problem");
  verify->add_option("file", file, "Problem JSON")->required();
  verify->add_option("channel", channel_file, "Channel JSON written by invert")->required();
  verify->add_option("--mode", mode, "bayes or disint")->check(CLI::IsMember({"bayes", "disint"}));
  verify->add_option("--eps-eq", eps_eq, "Equality tolerance");
  verify->add_option("--eps-rank", eps_rank, "Relative rank cutoff");
  verify->add_flag("--pretty", pretty, "Indented JSON output");

  auto* random = app.add_subcommand("random", "Write a seeded random problem");
  random->add_option("--dims", dims, "source:target block sizes, e.g. 2:4 or 1,2:3,2")->required();
  random->add_option("--kind", kind, "product, nonproduct, rankdef, kraus or hom")
      ->check(CLI::IsMember({"product", "nonproduct", "rankdef", "kraus", "hom"}));
  random->add_option("--seed", seed, "Generator seed");
  random->add_option("--out", out, "Output path (stdout when omitted)");
  random->add_flag("--pretty", pretty, "Indented JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      const qbayes::Problem p = load(file, eps_eq, eps_rank);
      std::cout << qbayes::run_check(p, split(analyses, ','), pretty);
    } else if (invert->parsed()) {
      const qbayes::Problem p = load(file, eps_eq, eps_rank);
      const qbayes::InvertOutcome o = qbayes::run_invert(p, parse_mode(mode), pretty);
      if (o.result) qbayes::write_file(out, qbayes::serialize_channel(*o.result, pretty));
      std::cout << o.report;
    } else if (verify->parsed()) {
      const qbayes::Problem p = load(file, eps_eq, eps_rank);
      const qbayes::Channel g = qbayes::parse_channel(qbayes::read_file(channel_file));
      std::cout << qbayes::run_verify(p, g, parse_mode(mode), pretty);
    } else if (random->parsed()) {
      const auto colon = dims.find(':');
      if (colon == std::string::npos) {
        throw qbayes::Error(qbayes::ErrorKind::InvalidArgument, "--dims expects source:target");
      }
      const auto problem = qbayes::random_problem(*qbayes::parse_random_kind(kind), parse_dims(dims.substr(0, colon)),
                                                  parse_dims(dims.substr(colon + 1)), seed);
      const std::string text = qbayes::serialize_problem(problem, pretty);
      if (out.empty()) {
        std::cout << text;
      } else {
        qbayes::write_file(out, text);
      }
    }
  } catch (const qbayes::Error& e) {
    std::cerr << "qbayes: " << e.what() << "\n";
    return qbayes::exit_code(e);
  }
  return 0;
}
