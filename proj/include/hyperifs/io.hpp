// Copyright 2026 The hyperifs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperifs/minimality.hpp"

namespace hyperifs {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// System configs.

inline Json map_to_json(const MapSpec& m) {
  Json j;
  j["kind"] = to_string(m.kind);
  if (!m.label.empty()) j["label"] = m.label;
  switch (m.kind) {
    case MapKind::PiecewiseLinear:
      j["breakpoints"] = m.breakpoints;
      j["values"] = m.values;
      break;
    case MapKind::Rotation:
      j["angle"] = m.angle;
      break;
    case MapKind::NorthSouth:
      j["p"] = m.p;
      j["q"] = m.q;
      j["s"] = m.s;
      j["invert"] = m.invert;
      break;
    case MapKind::SymbolPrepend:
      j["symbol"] = m.symbol;
      break;
    case MapKind::SymbolShift:
      break;
  }
  return j;
}

inline MapSpec map_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  std::string label = j.value("label", std::string{});
  if (kind == "piecewise_linear")
    return MapSpec::piecewise_linear(j.at("breakpoints").get<std::vector<double>>(),
                                     j.at("values").get<std::vector<double>>(),
                                     label);
  if (kind == "rotation") return MapSpec::rotation(j.at("angle").get<double>(), label);
  if (kind == "north_south")
    return MapSpec::north_south(j.at("p").get<double>(), j.at("q").get<double>(),
                                j.at("s").get<double>(), j.value("invert", false),
                                label);
  if (kind == "symbol_prepend")
    return MapSpec::symbol_prepend(j.at("symbol").get<int>(), label);
  if (kind == "symbol_shift") return MapSpec::symbol_shift(label);
  throw std::invalid_argument("unknown map kind: " + kind);
}

inline GridSpace space_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  int n = j.at("resolution").get<int>();
  if (kind == "interval") return GridSpace::interval(n);
  if (kind == "circle") return GridSpace::circle(n);
  if (kind == "shift") {
    int d = 0;
    while ((1 << d) < n) ++d;
    if ((1 << d) != n)
      throw std::invalid_argument("shift resolution must be a power of two");
    return GridSpace::shift_space(d);
  }
  throw std::invalid_argument("unknown space kind: " + kind);
}

inline Json space_to_json(const GridSpace& s) {
  Json j;
  switch (s.kind()) {
    case SpaceKind::Interval01: j["kind"] = "interval"; break;
    case SpaceKind::Circle: j["kind"] = "circle"; break;
    case SpaceKind::ShiftSpace: j["kind"] = "shift"; break;
  }
  j["resolution"] = s.resolution();
  return j;
}

inline Json system_to_json(const IfsSystem& sys) {
  Json j;
  j["name"] = sys.name;
  j["space"] = space_to_json(sys.space);
  Json gens = Json::array();
  for (const MapSpec& m : sys.generators) gens.push_back(map_to_json(m));
  j["generators"] = gens;
  return j;
}

inline IfsSystem system_from_json(const Json& j) {
  std::vector<MapSpec> gens;
  for (const Json& g : j.at("generators")) gens.push_back(map_from_json(g));
  return IfsSystem(space_from_json(j.at("space")), std::move(gens),
                   j.value("name", std::string{}));
}

inline IfsSystem with_resolution(const IfsSystem& sys, int n) {
  if (n <= 0 || n == sys.space.resolution()) return sys;
  Json sp = space_to_json(sys.space);
  sp["resolution"] = n;
  return IfsSystem{space_from_json(sp), sys.generators, sys.name};
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Json j;
  in >> j;
  return j;
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline void save_json(const std::string& path, const Json& j) {
  save_text(path, j.dump(2) + "\n");
}

// FNV-1a over the canonical dump; stable across runs for identical configs.
inline std::string config_hash(const Json& j) {
  std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

// ---------------------------------------------------------------------------
// Sets and words.

inline Json set_to_json(const CompactSet& a) {
  Json j;
  j["resolution"] = a.space().resolution();
  Json runs = Json::array();
  for (auto [start, len] : a.runs()) runs.push_back(Json::array({start, len}));
  j["runs"] = runs;
  return j;
}

inline CompactSet set_from_json(const GridSpace& s, const Json& j) {
  std::vector<std::pair<int, int>> runs;
  for (const Json& r : j.at("runs"))
    runs.emplace_back(r.at(0).get<int>(), r.at(1).get<int>());
  return CompactSet::from_runs(s, runs);
}

inline Json word_to_json(const Word& w) {
  Json a = Json::array();
  for (std::uint16_t g : w.indices) a.push_back(int(g));
  return a;
}

inline Word word_from_json(const Json& j) {
  Word w;
  for (const Json& v : j) w.indices.push_back(std::uint16_t(v.get<int>()));
  return w;
}

// ---------------------------------------------------------------------------
// Convergence certificates.

inline Json certificate_to_json(const IfsSystem& sys,
                                const AttractingFixedPoint& afp,
                                const ConvergenceBound& bound) {
  Json j;
  j["type"] = "convergence_certificate";
  j["system"] = system_to_json(sys);
  j["system_hash"] = config_hash(j["system"]);
  j["resolution"] = sys.space.resolution();
  j["eps"] = bound.eps;
  j["fixed_point"] = {{"generator_index", afp.generator_index},
                      {"p", afp.p},
                      {"radius", afp.radius},
                      {"delta", afp.delta},
                      {"contraction_time", afp.contraction_time},
                      {"multiplier", afp.multiplier}};
  j["k_U"] = bound.k_U;
  j["n0"] = bound.n0;
  j["s_eps"] = bound.s_eps;
  j["N"] = bound.N;
  j["prefix_steps"] = bound.prefix_steps;
  Json cover = Json::array();
  if (bound.cover)
    for (const Word& w : bound.cover->words) cover.push_back(word_to_json(w));
  j["cover_words"] = cover;
  Json funnel = Json::array();
  for (const FunnelEntry& f : bound.funnel)
    funnel.push_back(Json{{"y", f.y}, {"word", word_to_json(f.word)}});
  j["funnel"] = funnel;
  return j;
}

struct CertificateCheck {
  bool ok = false;
  int resolution = 0;
  double slack = 0.0;
  std::vector<std::string> failures;
};

// Recomputes every claim a certificate makes, optionally on a finer grid.
// On the certificate's own grid all claims must hold exactly; on a finer
// grid each containment gets one coarse cell of slack (refinement moves
// region boundaries by at most the coarse cell size).
inline CertificateCheck verify_certificate_json(const Json& cert,
                                                int resolution_override = 0) {
  CertificateCheck out;
  auto fail = [&](const std::string& msg) { out.failures.push_back(msg); };
  if (cert.value("type", std::string{}) != "convergence_certificate") {
    fail("not a convergence certificate");
    return out;
  }
  IfsSystem stored = system_from_json(cert.at("system"));
  double h_coarse = stored.space.cell_diameter();
  int res = resolution_override > 0 ? resolution_override
                                    : stored.space.resolution();
  IfsSystem sys = with_resolution(stored, res);
  const GridSpace& s = sys.space;
  out.resolution = res;
  out.slack = res == stored.space.resolution() ? 0.0 : h_coarse;
  double slack = out.slack;

  const Json& fp = cert.at("fixed_point");
  int gi = fp.at("generator_index").get<int>();
  double p = fp.at("p").get<double>();
  double radius = fp.at("radius").get<double>();
  double delta = fp.at("delta").get<double>();
  double eps = cert.at("eps").get<double>();
  int k_U = cert.at("k_U").get<int>();
  int n0 = cert.at("n0").get<int>();
  int s_eps = cert.at("s_eps").get<int>();
  int N = cert.at("N").get<int>();
  if (gi < 0 || gi >= int(sys.generators.size())) {
    fail("generator index out of range");
    return out;
  }
  const MapSpec& gen = sys.generators[std::size_t(gi)];

  if (!detail::ball_traps(gen, s, p, radius))
    fail("U is not trapped by the contracting generator");
  if (!detail::ball_traps(gen, s, p, delta))
    fail("B(p, delta) is not forward invariant");

  Iv st{p - radius, p + radius, false, false};
  if (s.kind() == SpaceKind::Interval01) {
    st.lo = std::max(0.0, st.lo);
    st.hi = std::min(1.0, st.hi);
  }
  for (int t = 0; t < n0; ++t)
    st = detail::interval_image(gen, s, st.lo, st.hi);
  IvSet dball{Iv{p - delta - slack, p + delta + slack, false, false}};
  if (!iv_covers(s, dball, st.lo, st.hi, 0.0))
    fail("U does not contract into B(p, delta) within n0 steps");

  CompactSet U = CompactSet::ball(s, p, radius);
  IvSet u_regions = regions_of_set(U);
  BitMask covered{std::size_t(s.resolution())};
  std::vector<Word> cover_words;
  int max_cover_len = 0;
  for (const Json& jw : cert.at("cover_words")) {
    Word w = word_from_json(jw);
    if (w.indices.empty()) {
      fail("empty cover word");
      continue;
    }
    covered |= word_preimage_cells(sys, w, u_regions);
    max_cover_len = std::max(max_cover_len, int(w.length()));
    cover_words.push_back(std::move(w));
  }
  auto cover_complete = [&]() {
    if (!covered.any()) return false;
    CompactSet cs(s, covered);
    return slack == 0.0 ? cs.is_full() : max_gap(cs) <= slack;
  };
  if (!cover_complete()) {
    // The capped enclosures may drop preimage components; redo the marking
    // without the cap before declaring the cover broken.
    for (const Word& w : cover_words) {
      IvSet vs = u_regions;
      for (std::uint16_t g : w.indices) {
        IvSet pre;
        for (const Iv& v : vs)
          preimage_interval(sys.generators[g], s, v, pre);
        merge_ivset(pre);
        vs = std::move(pre);
        if (vs.size() > 4096) break;
      }
      for (const Iv& v : vs) mark_cells(s, v, covered);
    }
  }
  if (!cover_complete()) fail("cover words do not cover every cell");
  if (max_cover_len != k_U) fail("k_U does not match the longest cover word");

  const Json& funnel = cert.at("funnel");
  if (funnel.empty()) fail("empty funnel");
  IvSet source{Iv{p - delta, p + delta, false, false}};
  if (s.kind() == SpaceKind::Interval01) {
    source[0].lo = std::max(0.0, source[0].lo);
    source[0].hi = std::min(1.0, source[0].hi);
  }
  int max_funnel_len = 0;
  std::vector<double> net;
  for (const Json& jf : funnel) {
    double y = jf.at("y").get<double>();
    Word w = word_from_json(jf.at("word"));
    net.push_back(y);
    max_funnel_len = std::max(max_funnel_len, int(w.length()));
    if (w.indices.empty()) {
      fail("empty funnel word");
      continue;
    }
    IvSet img = word_image_enclosure(sys, w, source);
    IvSet ball{Iv{y - eps / 2 - slack, y + eps / 2 + slack, false, false}};
    if (s.kind() == SpaceKind::Interval01) {
      ball[0].lo = std::max(0.0, ball[0].lo);
      ball[0].hi = std::min(1.0, ball[0].hi);
    }
    for (const Iv& v : img)
      if (!iv_covers(s, ball, v.lo, v.hi, 0.0)) {
        fail("funnel word image leaves the target ball");
        break;
      }
  }
  if (max_funnel_len != s_eps) fail("s_eps does not match the funnel words");
  for (int c = 0; c < s.resolution(); ++c) {
    double best = s.diameter();
    for (double y : net) best = std::min(best, s.metric(s.center(c), y));
    if (best > eps / 2 + slack) {
      fail("funnel targets do not form an eps/2 net");
      break;
    }
  }
  if (N != k_U + n0 + s_eps) fail("N != k_U + n0 + s_eps");

  out.ok = out.failures.empty();
  return out;
}

// ---------------------------------------------------------------------------
// CSV and SVG artifacts.

inline void write_csv(const std::string& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
  save_text(path, out.str());
}

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

// Line chart of one or more traces on a shared index axis, with an optional
// horizontal threshold line.
inline std::string svg_trace(const std::vector<std::vector<double>>& series,
                             const std::string& title, double threshold = -1) {
  const double W = 720, H = 360, ml = 50, mr = 15, mt = 30, mb = 30;
  double vmax = threshold > 0 ? threshold : 0.0;
  std::size_t len = 1;
  for (const auto& tr : series) {
    len = std::max(len, tr.size());
    for (double v : tr) vmax = std::max(vmax, v);
  }
  if (vmax <= 0) vmax = 1.0;
  vmax *= 1.05;
  auto X = [&](std::size_t i) {
    return ml + (W - ml - mr) * (len > 1 ? double(i) / double(len - 1) : 0.5);
  };
  auto Y = [&](double v) { return H - mb - (H - mt - mb) * (v / vmax); };
  std::ostringstream o;
  o << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
    << H << "' viewBox='0 0 " << W << " " << H << "'>\n"
    << "<rect width='100%' height='100%' fill='white'/>\n"
    << "<text x='" << ml << "' y='18' font-size='13' font-family='monospace'>"
    << title << "</text>\n"
    << "<line x1='" << ml << "' y1='" << Y(0) << "' x2='" << W - mr
    << "' y2='" << Y(0) << "' stroke='black'/>\n"
    << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
    << Y(0) << "' stroke='black'/>\n";
  if (threshold > 0) {
    o << "<line x1='" << ml << "' y1='" << detail::svg_num(Y(threshold))
      << "' x2='" << W - mr << "' y2='" << detail::svg_num(Y(threshold))
      << "' stroke='red' stroke-dasharray='6,4'/>\n";
  }
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    o << "<polyline fill='none' stroke='" << colors[k % 6]
      << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < series[k].size(); ++i)
      o << detail::svg_num(X(i)) << "," << detail::svg_num(Y(series[k][i]))
        << " ";
    o << "'/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

// One row per set: filled spans over the cell axis. Works for every space
// kind (circle rows wrap visually at the right edge; shift rows are the
// lexicographic cylinder order).
inline std::string svg_filmstrip(const std::vector<CompactSet>& sets,
                                 const std::string& title,
                                 std::size_t max_rows = 96) {
  if (sets.empty()) return "<svg xmlns='http://www.w3.org/2000/svg'/>";
  std::size_t stride = (sets.size() + max_rows - 1) / max_rows;
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < sets.size(); i += stride) picks.push_back(i);
  const double W = 720, rowh = 6, ml = 50, mt = 30;
  double H = mt + rowh * double(picks.size()) + 10;
  int n = sets[0].space().resolution();
  std::ostringstream o;
  o << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
    << H << "' viewBox='0 0 " << W << " " << H << "'>\n"
    << "<rect width='100%' height='100%' fill='white'/>\n"
    << "<text x='" << ml << "' y='18' font-size='13' font-family='monospace'>"
    << title << "</text>\n";
  for (std::size_t r = 0; r < picks.size(); ++r) {
    double y = mt + rowh * double(r);
    for (auto [start, len] : sets[picks[r]].runs()) {
      double x0 = ml + (W - ml - 10) * double(start) / double(n);
      double w = (W - ml - 10) * double(len) / double(n);
      o << "<rect x='" << detail::svg_num(x0) << "' y='"
        << detail::svg_num(y) << "' width='" << detail::svg_num(w)
        << "' height='" << detail::svg_num(rowh - 1) << "' fill='#1f3b6d'/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace hyperifs
