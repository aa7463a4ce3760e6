// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qbayes/error.hpp"
#include "qbayes/report.hpp"
#include "json_detail.hpp"

namespace qbayes {

using nlohmann::json;

std::string_view to_string(ChannelKind kind) noexcept {
  switch (kind) {
    case ChannelKind::Hom: return "hom";
    case ChannelKind::Choi: return "choi";
    case ChannelKind::Kraus: return "kraus";
  }
  return "?";
}

namespace detail {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    // Keep only the reason; the position is reported in our own terms.
    std::string reason = e.what();
    if (const auto pos = reason.find(": "); pos != std::string::npos) reason = reason.substr(pos + 2);
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + reason);
  }
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaError, path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::size_t to_index(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) schema_error(path, "expected a non-negative integer");
  return v.get<std::size_t>();
}

double to_double(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

std::vector<std::size_t> to_dims(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) schema_error(path, "expected a non-empty array of block sizes");
  std::vector<std::size_t> dims;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::size_t d = to_index(v[k], path + "[" + std::to_string(k) + "]");
    if (d == 0) schema_error(path + "[" + std::to_string(k) + "]", "block size must be positive");
    dims.push_back(d);
  }
  return dims;
}

MultiMatrixAlgebra to_algebra(const json& v, const std::string& path) {
  return MultiMatrixAlgebra(to_dims(field(v, "blocks", path), path + ".blocks"));
}

json from_algebra(const MultiMatrixAlgebra& a) { return json{{"blocks", a.block_dims()}}; }

CMatrix to_matrix(const json& v, const std::string& path) {
  const json& data = field(v, "data", path);
  const std::string dpath = path + ".data";
  if (!data.is_array()) schema_error(dpath, "expected an array");
  std::size_t rows = 0, cols = 0;
  if (v.contains("rows") || v.contains("cols")) {
    rows = to_index(field(v, "rows", path), path + ".rows");
    cols = to_index(field(v, "cols", path), path + ".cols");
  } else {
    std::size_t n = 0;
    while (n * n < data.size()) ++n;
    if (n * n != data.size()) schema_error(path, "rows/cols omitted and data is not a square count");
    rows = cols = n;
  }
  if (data.size() != rows * cols) schema_error(dpath, "expected rows*cols entries");
  std::vector<Complex> entries;
  entries.reserve(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    const std::string epath = dpath + "[" + std::to_string(k) + "]";
    const json& e = data[k];
    if (e.is_number()) {
      entries.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2) {
      entries.emplace_back(to_double(e[0], epath + "[0]"), to_double(e[1], epath + "[1]"));
    } else {
      schema_error(epath, "expected a number or [re, im]");
    }
  }
  try {
    return CMatrix(rows, cols, std::move(entries));
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

json from_matrix(const CMatrix& m) {
  json data = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) data.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json from_choi_grid(const Channel& f) {
  json out = json::array();
  for (std::size_t x = 0; x < f.target().num_blocks(); ++x)
    for (std::size_t y = 0; y < f.source().num_blocks(); ++y)
      out.push_back(json{{"x", x}, {"y", y}, {"op", from_matrix(f.choi(x, y))}});
  return out;
}

json from_channel(const Channel& f) {
  return json{{"schema", kChannelSchema},
              {"source", from_algebra(f.source())},
              {"target", from_algebra(f.target())},
              {"kind", "choi"},
              {"choi", from_choi_grid(f)}};
}

std::vector<std::vector<CMatrix>> to_choi_grid(const json& v, const std::string& path, const MultiMatrixAlgebra& src,
                                               const MultiMatrixAlgebra& tgt) {
  if (!v.is_array()) schema_error(path, "expected an array of {x, y, op}");
  std::vector<std::vector<CMatrix>> grid(tgt.num_blocks());
  for (std::size_t x = 0; x < tgt.num_blocks(); ++x)
    for (std::size_t y = 0; y < src.num_blocks(); ++y) {
      const std::size_t s = tgt.block_dim(x) * src.block_dim(y);
      grid[x].push_back(CMatrix(s, s));
    }
  std::vector<std::vector<bool>> seen(tgt.num_blocks(), std::vector<bool>(src.num_blocks(), false));
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string epath = path + "[" + std::to_string(k) + "]";
    const std::size_t x = to_index(field(v[k], "x", epath), epath + ".x");
    const std::size_t y = to_index(field(v[k], "y", epath), epath + ".y");
    if (x >= tgt.num_blocks()) schema_error(epath + ".x", "target block out of range");
    if (y >= src.num_blocks()) schema_error(epath + ".y", "source block out of range");
    if (seen[x][y]) schema_error(epath, "duplicate block pair");
    seen[x][y] = true;
    CMatrix op = to_matrix(field(v[k], "op", epath), epath + ".op");
    if (op.rows() != grid[x][y].rows() || op.cols() != grid[x][y].cols()) {
      schema_error(epath + ".op", "Choi block must be " + std::to_string(grid[x][y].rows()) + "x" +
                                      std::to_string(grid[x][y].rows()));
    }
    grid[x][y] = std::move(op);
  }
  return grid;
}

Channel to_channel(const json& v, const std::string& path) {
  const MultiMatrixAlgebra src = to_algebra(field(v, "source", path), path + ".source");
  const MultiMatrixAlgebra tgt = to_algebra(field(v, "target", path), path + ".target");
  auto grid = to_choi_grid(field(v, "choi", path), path + ".choi", src, tgt);
  try {
    return Channel(src, tgt, std::move(grid));
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

}  // namespace detail

namespace {

using namespace detail;

Tolerances to_tolerances(const json& v, const std::string& path, Tolerances tol) {
  if (!v.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, value] : v.items()) {
    const std::string p = path + "." + key;
    if (key == "eps_rank") tol.eps_rank = to_double(value, p);
    else if (key == "eps_eq") tol.eps_eq = to_double(value, p);
    else if (key == "eps_recon") tol.eps_recon = to_double(value, p);
    else if (key == "eps_abs") tol.eps_abs = to_double(value, p);
    else schema_error(p, "unknown tolerance");
  }
  try {
    tol.validate();
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  return tol;
}

State to_state(const json& v, const std::string& path, const MultiMatrixAlgebra& alg, const Tolerances& tol) {
  const json& w = field(v, "weights", path);
  const json& d = field(v, "densities", path);
  if (!w.is_array()) schema_error(path + ".weights", "expected an array");
  if (!d.is_array()) schema_error(path + ".densities", "expected an array");
  if (w.size() != alg.num_blocks()) schema_error(path + ".weights", "one weight per target block expected");
  if (d.size() != alg.num_blocks()) schema_error(path + ".densities", "one entry per target block expected");
  std::vector<double> weights;
  std::vector<std::optional<CMatrix>> densities;
  for (std::size_t k = 0; k < w.size(); ++k) {
    weights.push_back(to_double(w[k], path + ".weights[" + std::to_string(k) + "]"));
    if (d[k].is_null()) {
      densities.emplace_back();
    } else {
      densities.emplace_back(to_matrix(d[k], path + ".densities[" + std::to_string(k) + "]"));
    }
  }
  try {
    return State(alg, std::move(weights), std::move(densities), tol);
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

json from_state(const State& s) {
  json d = json::array();
  for (const auto& rho : s.densities()) d.push_back(rho ? from_matrix(*rho) : json(nullptr));
  return json{{"weights", s.weights()}, {"densities", std::move(d)}};
}

json from_tolerances(const Tolerances& t) {
  return json{{"eps_rank", t.eps_rank}, {"eps_eq", t.eps_eq}, {"eps_recon", t.eps_recon}, {"eps_abs", t.eps_abs}};
}

void strip(json& j) {
  if (j.is_object()) {
    j.erase("timing_ms");
    for (auto& [k, v] : j.items()) strip(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip(v);
  }
}

}  // namespace

Problem parse_problem(std::string_view text, const Tolerances& defaults) {
  const json root = parse_json(text);
  if (!root.is_object()) schema_error("(root)", "expected an object");
  if (root.contains("schema") && root["schema"] != kProblemSchema) {
    schema_error("schema", "expected \"" + std::string(kProblemSchema) + "\"");
  }
  const Tolerances tol = root.contains("tolerances") ? to_tolerances(root["tolerances"], "tolerances", defaults)
                                                     : defaults;
  const json& ch = field(root, "channel", "");
  const MultiMatrixAlgebra src = to_algebra(field(ch, "source", "channel"), "channel.source");
  const MultiMatrixAlgebra tgt = to_algebra(field(ch, "target", "channel"), "channel.target");
  const json& kind_j = field(ch, "kind", "channel");
  if (!kind_j.is_string()) schema_error("channel.kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();

  std::optional<HomSpec> hom;
  std::vector<KrausOperator> kraus;
  std::optional<Channel> channel;
  ChannelKind ck;
  if (kind == "hom") {
    ck = ChannelKind::Hom;
    const json& m = field(ch, "mult", "channel");
    if (!m.is_array()) schema_error("channel.mult", "expected a matrix of multiplicities");
    std::vector<std::vector<std::size_t>> c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string rpath = "channel.mult[" + std::to_string(i) + "]";
      if (!m[i].is_array()) schema_error(rpath, "expected an array");
      std::vector<std::size_t> row;
      for (std::size_t j = 0; j < m[i].size(); ++j)
        row.push_back(to_index(m[i][j], rpath + "[" + std::to_string(j) + "]"));
      c.push_back(std::move(row));
    }
    try {
      hom.emplace(src, tgt, std::move(c));
    } catch (const Error& e) {
      schema_error("channel.mult", e.what());
    }
    channel.emplace(Channel::from_hom(*hom));
  } else if (kind == "kraus") {
    ck = ChannelKind::Kraus;
    const json& ks = field(ch, "kraus", "channel");
    if (!ks.is_array() || ks.empty()) schema_error("channel.kraus", "expected a non-empty array");
    for (std::size_t k = 0; k < ks.size(); ++k) {
      const std::string p = "channel.kraus[" + std::to_string(k) + "]";
      const std::size_t x = to_index(field(ks[k], "x", p), p + ".x");
      const std::size_t y = to_index(field(ks[k], "y", p), p + ".y");
      kraus.push_back({x, y, to_matrix(field(ks[k], "op", p), p + ".op")});
    }
    try {
      channel.emplace(Channel::from_kraus(src, tgt, kraus));
    } catch (const Error& e) {
      schema_error("channel.kraus", e.what());
    }
  } else if (kind == "choi") {
    ck = ChannelKind::Choi;
    auto grid = to_choi_grid(field(ch, "choi", "channel"), "channel.choi", src, tgt);
    try {
      channel.emplace(src, tgt, std::move(grid));
    } catch (const Error& e) {
      schema_error("channel.choi", e.what());
    }
  } else {
    schema_error("channel.kind", "expected \"hom\", \"choi\" or \"kraus\"");
  }
  const UcpVerdict ucp = is_ucp(*channel, tol);
  if (!ucp.ucp()) {
    schema_error("channel", std::string("not unital completely positive (") +
                                (!ucp.hermitian ? "not Hermitian" : !ucp.cp ? "not CP" : "not unital") + ")");
  }

  const json& st = field(root, "state", "");
  State state = to_state(st, "state", tgt, tol);

  std::vector<std::string> analyses;
  if (root.contains("analyses")) {
    const json& a = root["analyses"];
    if (!a.is_array()) schema_error("analyses", "expected an array of names");
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string p = "analyses[" + std::to_string(k) + "]";
      if (!a[k].is_string()) schema_error(p, "expected a string");
      const std::string name = a[k].get<std::string>();
      if (std::find(all_analyses().begin(), all_analyses().end(), name) == all_analyses().end()) {
        schema_error(p, "unknown analysis \"" + name + "\"");
      }
      analyses.push_back(name);
    }
  }
  std::string meta = "{}";
  if (root.contains("meta")) {
    if (!root["meta"].is_object()) schema_error("meta", "expected an object");
    meta = root["meta"].dump();
  }
  for (const auto& [key, value] : root.items()) {
    (void)value;
    if (key != "schema" && key != "channel" && key != "state" && key != "tolerances" && key != "analyses" &&
        key != "meta") {
      schema_error(key, "unknown field");
    }
  }
  return Problem{ck, std::move(*channel), std::move(hom), std::move(kraus), std::move(state), tol,
                 std::move(analyses), std::move(meta)};
}

std::string serialize_problem(const Problem& p, bool pretty) {
  json ch{{"source", from_algebra(p.channel.source())},
          {"target", from_algebra(p.channel.target())},
          {"kind", to_string(p.kind)}};
  switch (p.kind) {
    case ChannelKind::Hom: ch["mult"] = p.hom->multiplicities(); break;
    case ChannelKind::Kraus: {
      json ks = json::array();
      for (const auto& k : p.kraus) ks.push_back(json{{"x", k.target_block}, {"y", k.source_block}, {"op", from_matrix(k.op)}});
      ch["kraus"] = std::move(ks);
      break;
    }
    case ChannelKind::Choi: ch["choi"] = from_choi_grid(p.channel); break;
  }
  json root{{"schema", kProblemSchema},
            {"channel", std::move(ch)},
            {"state", from_state(p.state)},
            {"tolerances", from_tolerances(p.tolerances)},
            {"meta", json::parse(p.meta)}};
  if (!p.analyses.empty()) root["analyses"] = p.analyses;
  return root.dump(pretty ? 2 : -1) + "\n";
}

Channel parse_channel(std::string_view text) {
  const json root = parse_json(text);
  if (root.contains("schema") && root["schema"] != kChannelSchema) {
    schema_error("schema", "expected \"" + std::string(kChannelSchema) + "\"");
  }
  if (root.contains("kind") && root["kind"] != "choi") schema_error("kind", "channel files use \"choi\"");
  return to_channel(root, "channel");
}

std::string serialize_channel(const Channel& f, bool pretty) { return from_channel(f).dump(pretty ? 2 : -1) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::InvalidArgument, "failed writing " + path);
}

std::string strip_timing(std::string_view report_json) {
  json j = parse_json(report_json);
  strip(j);
  return j.dump();
}

}  // namespace qbayes
