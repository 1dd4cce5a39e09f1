#include "wgsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wgsim::app {

using nlohmann::json;

namespace {

// Object cursor that remembers which keys were read so leftovers can be rejected.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& value() const { return value_; }

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(path_, message); }

  void expect_object() const {
    if (!value_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) const { return value_.is_object() && value_.contains(key); }

  Node at(const std::string& key) {
    expect_object();
    if (!value_.contains(key)) throw ConfigError(child_path(key), "required field is missing");
    used_.insert(key);
    return Node(value_.at(key), child_path(key));
  }

  std::optional<Node> find(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return at(key);
  }

  std::vector<Node> elements() const {
    if (!value_.is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_.size(); ++i) out.emplace_back(value_[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("must be finite");
    return v;
  }

  double positive() const {
    const double v = number();
    if (v <= 0.0) fail("must be strictly positive");
    return v;
  }

  std::uint64_t count() const {
    if (!value_.is_number_integer() || (value_.is_number_integer() && !value_.is_number_unsigned() && value_.get<std::int64_t>() < 0)) {
      fail("expected a non-negative integer");
    }
    return value_.get<std::uint64_t>();
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  std::string text() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  /// Rejects any key that was not consumed.
  void finish() const {
    expect_object();
    for (auto it = value_.begin(); it != value_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(child_path(it.key()), "unknown key");
    }
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& value_;
  std::string path_;
  std::set<std::string> used_;
};

// {"magnitude": m, "phase": p} or {"re": x, "im": y}
Complex parse_complex(Node node) {
  node.expect_object();
  Complex z;
  if (node.has("magnitude") || node.has("phase")) {
    const double m = node.at("magnitude").number();
    const double p = node.at("phase").number();
    if (m < 0.0) node.fail("magnitude must be non-negative");
    z = std::polar(m, p);
  } else {
    z = {node.at("re").number(), node.at("im").number()};
  }
  node.finish();
  return z;
}

ModeSpec parse_mode(Node node) {
  node.expect_object();
  const std::string kind = node.at("kind").text();
  ModeSpec spec;
  if (kind == "coherent") {
    spec = CoherentSpec{parse_complex(node.at("beta"))};
  } else if (kind == "cat") {
    CatSpec c;
    c.beta = parse_complex(node.at("beta"));
    c.a = node.at("a").number();
    c.b = node.at("b").number();
    c.theta = node.at("theta").number();
    if (std::abs(c.a * c.a + c.b * c.b - 1.0) > 1e-12) node.fail("cat coefficients must satisfy a^2 + b^2 = 1");
    spec = c;
  } else if (kind == "multi_cat") {
    Superposition s;
    for (auto& e : node.at("amplitudes").elements()) s.amplitudes.push_back(parse_complex(e));
    for (auto& e : node.at("coeffs").elements()) s.coeffs.push_back(parse_complex(e));
    spec = s;
  } else {
    node.at("kind").fail("unknown state kind '" + kind + "' (expected coherent, cat or multi_cat)");
  }
  node.finish();
  try {
    (void)make_state(spec);
  } catch (const std::invalid_argument& e) {
    node.fail(e.what());
  }
  return spec;
}

PhysicalConstants parse_constants(Node node) {
  PhysicalConstants c;
  if (auto h = node.find("hbar_meVps")) c.hbar = h->positive();
  if (auto v = node.find("vg_um_per_ps")) c.v_g = v->positive();
  node.finish();
  return c;
}

CouplingSchedule parse_schedule(Node node, std::size_t modes, const PhysicalConstants& constants) {
  const double length = node.at("length_um").positive();
  std::vector<double> omegas;
  if (auto o = node.find("omegas")) {
    for (auto& e : o->elements()) omegas.push_back(e.number());
    if (omegas.size() != modes) o->fail("expected one on-site frequency per mode");
  }
  std::vector<CouplingWindow> windows;
  for (auto& w : node.at("windows").elements()) {
    CouplingWindow win;
    auto pair = w.at("pair");
    const auto ends = pair.elements();
    if (ends.size() != 2) pair.fail("expected [i, i+1]");
    const auto i = ends[0].count(), j = ends[1].count();
    if (i < 1 || j != i + 1) pair.fail("pair must name adjacent modes [i, i+1] (1-based)");
    if (j > modes) pair.fail("pair references a mode beyond the mode count");
    win.first = i - 1;
    win.J = w.at("J_meV").number();
    if (win.J < 0.0) w.fail("J_meV must be non-negative");
    win.z0 = w.at("z0_um").number();
    win.sigma = w.at("sigma_um").positive();
    auto d = w.at("d");
    const auto dv = d.count();
    if (dv == 0 || dv % 2 != 0) d.fail("super-Gaussian exponent must be even and positive");
    win.d = static_cast<int>(dv);
    w.finish();
    windows.push_back(win);
  }
  node.finish();
  try {
    return CouplingSchedule(modes, std::move(windows), length, constants, std::move(omegas));
  } catch (const std::invalid_argument& e) {
    node.fail(e.what());
  }
}

WignerGridSpec parse_wigner(Node node) {
  WignerGridSpec g;
  if (auto v = node.find("re_min")) g.re_min = v->number();
  if (auto v = node.find("re_max")) g.re_max = v->number();
  if (auto v = node.find("im_min")) g.im_min = v->number();
  if (auto v = node.find("im_max")) g.im_max = v->number();
  if (auto v = node.find("resolution")) g.resolution = v->count();
  if (g.re_max <= g.re_min || g.im_max <= g.im_min) node.fail("grid extents must be increasing");
  if (g.resolution < 2) node.fail("resolution must be at least 2");
  node.finish();
  return g;
}

ClassificationParams parse_classification(Node node) {
  ClassificationParams c;
  if (auto v = node.find("n_points")) {
    c.n_points = v->count();
    if (c.n_points < 2 || c.n_points % 2 != 0) v->fail("n_points must be even");
  }
  if (auto v = node.find("noise")) {
    c.noise = v->number();
    if (c.noise < 0.0) v->fail("noise must be non-negative");
  }
  if (auto v = node.find("t_min")) c.t_min = v->positive();
  if (auto v = node.find("t_max")) c.t_max = v->positive();
  if (c.t_max <= c.t_min) node.fail("t_max must exceed t_min");
  if (auto v = node.find("n_resamples")) c.resampling.n_resamples = v->count();
  if (auto v = node.find("train_per_class")) c.resampling.train_per_class = v->count();
  if (auto v = node.find("test_per_class")) c.resampling.test_per_class = v->count();
  if (c.resampling.n_resamples < 1 || c.resampling.train_per_class < 1 || c.resampling.test_per_class < 1) {
    node.fail("resample count and split sizes must be positive");
  }
  if (c.n_points / 2 < c.resampling.train_per_class + c.resampling.test_per_class) {
    node.fail("n_points too small for the requested class-balanced splits");
  }
  if (auto v = node.find("boundary_resolution")) {
    c.boundary_resolution = v->count();
    if (c.boundary_resolution < 2) v->fail("must be at least 2");
  }
  if (auto e = node.find("encoding")) {
    auto& enc = c.encoding;
    if (auto v = e->find("mode1_magnitude")) enc.mode1_magnitude = v->number();
    if (auto v = e->find("kitten")) {
      const auto spec = parse_mode(*v);
      if (!std::holds_alternative<CatSpec>(spec)) v->fail("kitten must be of kind cat");
      enc.kitten = std::get<CatSpec>(spec);
    }
    if (auto v = e->find("classical_mode2")) enc.classical_mode2 = parse_complex(*v);
    if (auto v = e->find("mode3_magnitude")) enc.mode3_magnitude = v->number();
    if (auto v = e->find("mode3_phase")) enc.mode3_phase = v->number();
    if (auto v = e->find("mode4")) enc.mode4 = parse_complex(*v);
    e->finish();
  }
  node.finish();
  return c;
}

Command parse_command(Node node) {
  const std::string name = node.text();
  if (name == "states") return Command::states;
  if (name == "twomode") return Command::twomode;
  if (name == "cutoff-study") return Command::cutoff_study;
  if (name == "fourmode") return Command::fourmode;
  if (name == "classify") return Command::classify;
  node.fail("unknown command '" + name + "'");
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::states:
      return "states";
    case Command::twomode:
      return "twomode";
    case Command::cutoff_study:
      return "cutoff-study";
    case Command::fourmode:
      return "fourmode";
    case Command::classify:
      return "classify";
  }
  return "unknown";
}

std::string config_hash(const json& doc) {
  // FNV-1a, 64 bit, over the canonical (sorted-key) dump.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

RunConfig parse_config(const json& doc) {
  Node root(doc, "");
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  RunConfig cfg;
  cfg.hash = config_hash(doc);
  cfg.command = parse_command(root.at("command"));
  if (auto v = root.find("seed")) cfg.seed = v->count();
  if (auto c = root.find("constants")) cfg.constants = parse_constants(*c);
  if (auto m = root.find("modes")) {
    for (auto& e : m->elements()) cfg.modes.push_back(parse_mode(e));
    if (cfg.modes.empty()) m->fail("at least one mode is required");
  }
  if (auto s = root.find("schedule")) {
    if (!s->has("modes") && cfg.modes.empty() && cfg.command != Command::classify) {
      s->fail("a schedule needs the 'modes' list to fix the mode count");
    }
    const std::size_t n = cfg.command == Command::classify ? 4 : cfg.modes.size();
    cfg.schedule = parse_schedule(*s, n, cfg.constants);
  }
  if (auto i = root.find("integration")) {
    if (auto v = i->find("dz_um")) cfg.integration.dz = v->positive();
    if (auto v = i->find("record_every_um")) cfg.integration.record_every = v->positive();
    i->finish();
  }
  if (auto o = root.find("observables")) {
    if (auto v = o->find("n_max")) cfg.observables.n_max = v->count();
    if (auto v = o->find("wigner")) cfg.observables.wigner = parse_wigner(*v);
    if (auto v = o->find("pgm")) cfg.observables.pgm = v->boolean();
    o->finish();
  }
  if (auto s = root.find("states")) {
    std::set<std::string> names;
    for (auto& e : s->elements()) {
      const std::string name = e.at("name").text();
      if (name.empty() || name.find_first_of("/\\ ") != std::string::npos) e.at("name").fail("invalid state name");
      if (!names.insert(name).second) e.at("name").fail("duplicate state name '" + name + "'");
      cfg.states.push_back({name, parse_mode(e.at("state"))});
      e.finish();
    }
  }
  if (auto o = root.find("oracle")) {
    if (auto v = o->find("cutoffs")) {
      cfg.oracle.cutoffs.clear();
      for (auto& e : v->elements()) {
        const auto c = e.count();
        if (c < 2) e.fail("cutoff must be at least 2");
        cfg.oracle.cutoffs.push_back(c);
      }
      if (cfg.oracle.cutoffs.empty()) v->fail("at least one cutoff is required");
    }
    if (auto v = o->find("max_dimension")) cfg.oracle.max_dimension = v->count();
    o->finish();
  }
  if (auto c = root.find("classification")) cfg.classification = parse_classification(*c);
  if (auto f = root.find("flags")) {
    if (auto v = f->find("reproducible")) cfg.reproducible = v->boolean();
    if (auto v = f->find("oracle")) cfg.run_oracle = v->boolean();
    f->finish();
  }
  root.finish();

  auto require_section = [&](bool present, const std::string& name) {
    if (!present) throw ConfigError(name, "required for command '" + to_string(cfg.command) + "'");
  };
  switch (cfg.command) {
    case Command::states:
      require_section(!cfg.states.empty(), "states");
      break;
    case Command::twomode:
    case Command::fourmode:
    case Command::cutoff_study:
      require_section(!cfg.modes.empty(), "modes");
      require_section(cfg.schedule.has_value(), "schedule");
      break;
    case Command::classify:
      require_section(cfg.schedule.has_value(), "schedule");
      break;
  }
  if (cfg.command == Command::twomode && cfg.modes.size() != 2) throw ConfigError("modes", "twomode needs exactly 2 modes");
  if (cfg.command == Command::fourmode && cfg.modes.size() != 4) throw ConfigError("modes", "fourmode needs exactly 4 modes");
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open configuration file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config_text(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.field(), std::string(e.what()).substr(e.field().empty() ? 0 : e.field().size() + 2) +
                                     " (in " + path.string() + ")");
  }
}

}  // namespace wgsim::app
