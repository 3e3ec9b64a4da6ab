#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "hystreal/errors.hpp"
#include "hystreal/schedule.hpp"

namespace hystreal {

using nlohmann::json;

int Realization::grid_index(double u) const {
  for (std::size_t i = 0; i < u_grid.size(); ++i)
    if (u_grid[i] == u) return static_cast<int>(i);
  return -1;
}

const TransitionRecord* Realization::record_for(const std::string& source, Direction d) const {
  for (const auto& t : transitions)
    if (t.source == source && t.direction == d) return &t;
  return nullptr;
}

namespace {

struct Half {
  std::vector<DeformationSegment> segments;
  std::vector<TransitionRecord> records;
};

// Eliminates `sources` one by one (each landing on its target), then orders the survivors as
// `final_order`; parameter t runs over [t0, t1].
Half build_half(ScheduleBuilder& B, std::vector<std::string> arrangement, const std::vector<std::string>& sources,
                const std::map<std::string, std::string>& target_of, const std::vector<std::string>& final_order,
                double t0, double t1, Direction dir, int level) {
  Half out;
  const int parts = 2 * static_cast<int>(sources.size()) + 1;
  auto v = [&](int k) { return k == parts ? t1 : t0 + (t1 - t0) * k / parts; };

  auto permute_to = [&](const std::vector<std::string>& desired, double a, double b) {
    const int M = static_cast<int>(arrangement.size());
    Permutation p(M);
    for (int pos = 0; pos < M; ++pos) {
      const auto it = std::find(desired.begin(), desired.end(), arrangement[pos]);
      p[pos] = static_cast<int>(it - desired.begin()) + 1;
    }
    auto segs = B.permutation_segments(M, p, a, b);
    out.segments.insert(out.segments.end(), segs.begin(), segs.end());
    arrangement = desired;
  };

  for (std::size_t k = 0; k < sources.size(); ++k) {
    const auto& s = sources[k];
    const auto& t = target_of.at(s);
    try {
      std::vector<std::string> desired;
      for (const auto& a : arrangement)
        if (a != s && a != t) desired.push_back(a);
      desired.push_back(t);
      desired.push_back(s);
      permute_to(desired, v(2 * k), v(2 * k + 1));

      const int M = static_cast<int>(arrangement.size());
      const double a = v(2 * k + 1), b = v(2 * k + 2);
      auto fam = std::make_shared<SaddleNodeLift>(build_sn_family(B.standard(M), a, b, 0.5 * (a + b)));
      TransitionRecord r;
      r.direction = dir;
      r.level = level;
      r.source = s;
      r.target = t;
      r.u_a = a;
      r.u_b = b;
      r.u_sn = fam->family().u_sn();
      r.source_xy = {static_cast<double>(M), 0.0};
      r.target_xy = {static_cast<double>(M - 1), 0.0};
      out.records.push_back(r);
      char label[64];
      std::snprintf(label, sizeof label, "eliminate minimum %d", M);
      out.segments.push_back({fam, label});
      arrangement.pop_back();
    } catch (const std::exception& e) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "realize (i=%d, k=%zu, edge %s -> %s %s): ", level, k + 1, s.c_str(), t.c_str(),
                    to_string(dir).c_str());
      throw ConstructionError(buf + std::string(e.what()));
    }
  }
  permute_to(final_order, v(parts - 1), v(parts));
  return out;
}

}  // namespace

Realization realize(const AdmissibleGraph& g, const BuildOptions& opts) {
  require_admissible(g);
  Realization r;
  r.graph = g;
  r.options = opts;
  ScheduleBuilder B(opts);
  const int n = g.top_level();
  r.u_grid = g.input_values;
  r.X.resize(n + 1);
  int widest = 1;
  for (int i = 0; i <= n; ++i) {
    for (std::size_t m = 0; m < g.levels[i].size(); ++m) r.X[i][g.levels[i][m]] = {static_cast<double>(m + 1), 0.0};
    r.minima_at_grid.push_back(static_cast<int>(g.levels[i].size()));
  }

  std::vector<DeformationSegment> all;
  if (n == 0) {
    const double u0 = r.u_grid[0];
    all.push_back({std::make_shared<ConstantFamily>(separable(B.standard(r.minima_at_grid[0])), u0, u0 + 1.0), "hold"});
  }
  for (int i = 0; i < n; ++i) {
    const auto& old_v = g.levels[i];
    const auto& new_v = g.levels[i + 1];
    const double ui = r.u_grid[i], uj = r.u_grid[i + 1];
    const double um = 0.5 * (ui + uj);
    r.u_mid.push_back(um);
    r.minima_at_mid.push_back(static_cast<int>(old_v.size() + new_v.size()));
    widest = std::max(widest, r.minima_at_mid.back());

    std::vector<std::string> mid(old_v);
    mid.insert(mid.end(), new_v.begin(), new_v.end());

    // down half, built with t = ui + um - u running from ui to um, then reversed
    std::map<std::string, std::string> down_of;
    for (const auto& s : new_v) down_of[s] = g.down.at(s);
    const double pivot = ui + um;
    Half down = build_half(B, mid, new_v, down_of, old_v, ui, um, Direction::Down, i + 1);
    for (auto it = down.segments.rbegin(); it != down.segments.rend(); ++it)
      all.push_back({std::make_shared<ReversedFamily>(it->family, pivot), it->label});
    for (auto& rec : down.records) {
      const double a = rec.u_a, b = rec.u_b;
      rec.u_a = pivot - b;
      rec.u_b = pivot - a;
      rec.u_sn = pivot - rec.u_sn;
      r.transitions.push_back(rec);
    }

    std::map<std::string, std::string> up_of;
    for (const auto& s : old_v) up_of[s] = g.up.at(s);
    Half up = build_half(B, mid, old_v, up_of, new_v, um, uj, Direction::Up, i);
    all.insert(all.end(), up.segments.begin(), up.segments.end());
    r.transitions.insert(r.transitions.end(), up.records.begin(), up.records.end());
  }
  r.schedule = std::make_shared<const DeformationSchedule>(concatenate(std::move(all), 1e-9, -1.5, widest + 2.5));
  return r;
}

// ---------------------------------------------------------------------------------------
// Manifest

namespace {

json options_json(const BuildOptions& o) {
  const auto& g = o.geometry;
  const auto& m = o.mollify;
  return {{"geometry",
           {{"outer", g.outer},
            {"big", g.big},
            {"small", g.small},
            {"inner", g.inner},
            {"b_small", g.b_small},
            {"b_large", g.b_large},
            {"rho", g.rho},
            {"level_big", g.level_big},
            {"level_small", g.level_small},
            {"level_max", g.level_max}}},
          {"mollify",
           {{"circle_order", m.circle_order},
            {"disc_order", m.disc_order},
            {"self_check", m.self_check},
            {"tolerance", m.tolerance},
            {"recenter", m.recenter}}},
          {"fast_path", o.fast_path}};
}

BuildOptions options_of(const json& j) {
  BuildOptions o;
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    auto& p = o.geometry;
    p.outer = g.value("outer", p.outer);
    p.big = g.value("big", p.big);
    p.small = g.value("small", p.small);
    p.inner = g.value("inner", p.inner);
    p.b_small = g.value("b_small", p.b_small);
    p.b_large = g.value("b_large", p.b_large);
    p.rho = g.value("rho", p.rho);
    p.level_big = g.value("level_big", p.level_big);
    p.level_small = g.value("level_small", p.level_small);
    p.level_max = g.value("level_max", p.level_max);
  }
  if (j.contains("mollify")) {
    const auto& m = j.at("mollify");
    auto& q = o.mollify;
    q.circle_order = m.value("circle_order", q.circle_order);
    q.disc_order = m.value("disc_order", q.disc_order);
    q.self_check = m.value("self_check", q.self_check);
    q.tolerance = m.value("tolerance", q.tolerance);
    q.recenter = m.value("recenter", q.recenter);
  }
  o.fast_path = j.value("fast_path", o.fast_path);
  return o;
}

json xy(Vec2 p) { return json::array({p.x1, p.x2}); }
Vec2 xy_of(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

std::string options_to_json(const BuildOptions& o) { return options_json(o).dump(2); }

BuildOptions options_from_json(const std::string& text) {
  try {
    return options_of(json::parse(text));
  } catch (const json::exception& e) {
    throw DomainError(std::string("options: ") + e.what());
  }
}

std::string realization_manifest(const Realization& r) {
  json j;
  j["graph"] = json::parse(graph_to_json(r.graph));
  j["options"] = options_json(r.options);
  j["u_grid"] = r.u_grid;
  j["u_mid"] = r.u_mid;
  j["minima_at_grid"] = r.minima_at_grid;
  j["minima_at_mid"] = r.minima_at_mid;
  json segs = json::array();
  for (const auto& s : r.schedule->segments())
    segs.push_back({{"kind", s.family->kind()}, {"label", s.label}, {"u_a", s.u_a()}, {"u_b", s.u_b()}});
  j["segments"] = segs;
  json X = json::array();
  for (const auto& level : r.X) {
    json m = json::object();
    for (const auto& [v, p] : level) m[v] = xy(p);
    X.push_back(m);
  }
  j["X"] = X;
  json recs = json::array();
  for (const auto& t : r.transitions)
    recs.push_back({{"direction", to_string(t.direction)},
                    {"level", t.level},
                    {"source", t.source},
                    {"target", t.target},
                    {"u_a", t.u_a},
                    {"u_b", t.u_b},
                    {"u_sn", t.u_sn},
                    {"source_xy", xy(t.source_xy)},
                    {"target_xy", xy(t.target_xy)}});
  j["transitions"] = recs;
  return j.dump(2);
}

Realization load_manifest(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("manifest: ") + e.what());
  }
  try {
    const auto g = parse_graph_json(j.at("graph").dump());
    Realization r = realize(g, options_of(j.at("options")));
    r.X.clear();
    for (const auto& level : j.at("X")) {
      std::map<std::string, Vec2> m;
      for (auto it = level.begin(); it != level.end(); ++it) m[it.key()] = xy_of(it.value());
      r.X.push_back(m);
    }
    r.transitions.clear();
    for (const auto& t : j.at("transitions")) {
      TransitionRecord rec;
      const auto d = t.at("direction").get<std::string>();
      if (d != "up" && d != "down") throw DomainError("manifest: unknown direction " + d);
      rec.direction = d == "up" ? Direction::Up : Direction::Down;
      rec.level = t.at("level").get<int>();
      rec.source = t.at("source").get<std::string>();
      rec.target = t.at("target").get<std::string>();
      rec.u_a = t.at("u_a").get<double>();
      rec.u_b = t.at("u_b").get<double>();
      rec.u_sn = t.at("u_sn").get<double>();
      rec.source_xy = xy_of(t.at("source_xy"));
      rec.target_xy = xy_of(t.at("target_xy"));
      r.transitions.push_back(rec);
    }
    return r;
  } catch (const json::exception& e) {
    throw DomainError(std::string("manifest: ") + e.what());
  }
}

}  // namespace hystreal
