#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "minlen/cli.hpp"
#include "minlen/errors.hpp"

namespace minlen::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    if (text == "inf" || text == "+inf" || text == "infinity") return kInfinity;
    throw ConfigError("invalid number for '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  return value;
}

long parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError("invalid integer for '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  return value;
}

/// "a,b,c" or "start:stop:count" (count points, endpoints included).
std::vector<double> parse_list(std::string_view key, std::string_view text) {
  text = trim(text);
  std::vector<double> values;
  if (text.empty()) return values;
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = text.find(':', start);
      parts.push_back(text.substr(start, pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (parts.size() != 3) throw ConfigError("range for '" + std::string(key) + "' must be start:stop:count");
    const double a = parse_double(key, parts[0]);
    const double b = parse_double(key, parts[1]);
    const long count = parse_integer(key, parts[2]);
    if (count < 1) throw ConfigError("range count for '" + std::string(key) + "' must be positive");
    for (long i = 0; i < count; ++i) {
      values.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return values;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(',', start);
    values.push_back(parse_double(key, text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return values;
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_double(values[i]);
  }
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

class Reader {
public:
  explicit Reader(const KeyValues& kv) : kv_(kv) {}

  const std::string* find(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  void number(const std::string& key, double& target) {
    if (const auto* v = find(key)) target = parse_double(key, *v);
  }
  void number(const std::string& key, std::optional<double>& target) {
    if (const auto* v = find(key)) target = parse_double(key, *v);
  }

  void check_all_used() const {
    for (const auto& [key, value] : kv_) {
      if (!used_.count(key)) throw ConfigError("unknown configuration key '" + key + "'");
    }
  }

private:
  const KeyValues& kv_;
  std::set<std::string> used_;
};

void read_particle(Reader& r, int index, ParticleConfig& p) {
  const std::string prefix = "system.particle" + std::to_string(index) + ".";
  r.number("system.m" + std::to_string(index), p.mass);
  r.number(prefix + "mass", p.mass);
  if (const auto* v = r.find(prefix + "kind")) p.kind = parse_deformation_kind(lower(trim(*v)));
  r.number(prefix + "b", p.b);
  r.number(prefix + "beta", p.beta);
  r.number(prefix + "eta", p.eta);
  if (const auto* v = r.find(prefix + "table")) p.table = std::string(trim(*v));
}

void check_particle(const ParticleConfig& p, int index) {
  const std::string name = "particle " + std::to_string(index);
  if (!(p.mass > 0.0) || !std::isfinite(p.mass)) throw ConfigError(name + ": mass must be positive and finite");
  const int given = (p.b ? 1 : 0) + (p.beta ? 1 : 0) + (p.eta ? 1 : 0);
  if (given > 1) throw ConfigError(name + ": give at most one of b, beta, eta");
  switch (p.kind) {
    case DeformationKind::Cutoff:
      if (p.beta) throw ConfigError(name + ": cutoff family takes b or eta, not beta");
      break;
    case DeformationKind::Kempf:
    case DeformationKind::InverseSqrt:
      if (p.b) throw ConfigError(name + ": " + std::string(to_string(p.kind)) + " family takes beta or eta, not b");
      if (given == 0) throw ConfigError(name + ": " + std::string(to_string(p.kind)) + " family needs beta or eta");
      break;
    case DeformationKind::Custom:
      if (given) throw ConfigError(name + ": custom family is defined by its table only");
      if (p.table.empty()) throw ConfigError(name + ": custom family needs a table path");
      break;
  }
  if (p.kind != DeformationKind::Custom && !p.table.empty()) {
    throw ConfigError(name + ": table is only valid for the custom family");
  }
}

} // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    std::string_view line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
      }
      const auto key = trim(line.substr(0, eq));
      if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
      kv[std::string(key)] = std::string(trim(line.substr(eq + 1)));
    }
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return kv;
}

void apply_override(KeyValues& kv, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
  const auto key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("--set with empty key");
  kv[std::string(key)] = std::string(trim(assignment.substr(eq + 1)));
}

RunConfig to_run_config(const KeyValues& kv) {
  RunConfig c;
  Reader r(kv);
  read_particle(r, 1, c.particle1);
  read_particle(r, 2, c.particle2);
  r.number("system.hbar", c.hbar);

  if (const auto* v = r.find("interaction.kind")) {
    const auto kind = lower(trim(*v));
    if (kind == "delta") {
      c.interaction = InteractionKind::Delta;
    } else if (kind == "coulomb") {
      c.interaction = InteractionKind::Coulomb;
    } else {
      throw ConfigError("interaction.kind must be delta or coulomb");
    }
  }
  r.number("interaction.U0", c.U0);
  r.number("interaction.alpha", c.alpha);
  r.number("interaction.delta", c.delta);
  validate(DeltaInteraction{c.U0});
  validate(CoulombInteraction{c.alpha, c.delta});

  r.number("solve.p0", c.p0);
  if (const auto* v = r.find("solve.p0_grid")) c.p0_grid = parse_list("solve.p0_grid", *v);
  if (const auto* v = r.find("solve.n")) c.n = static_cast<int>(parse_integer("solve.n", *v));
  if (const auto* v = r.find("solve.n_max")) c.n_max = static_cast<int>(parse_integer("solve.n_max", *v));
  r.number("solve.tol", c.tol);
  if (const auto* v = r.find("solve.grid_size")) {
    const long g = parse_integer("solve.grid_size", *v);
    if (g < 16) throw ConfigError("solve.grid_size must be at least 16");
    c.grid_size = static_cast<std::size_t>(g);
  }

  if (const auto* v = r.find("series.family")) {
    const auto fam = lower(trim(*v));
    if (fam == "cutoff") {
      c.series_family = SeriesFamily::Cutoff;
    } else if (fam == "inversesqrt" || fam == "inverse_sqrt") {
      c.series_family = SeriesFamily::InverseSqrt;
    } else {
      throw ConfigError("series.family must be cutoff or inversesqrt");
    }
  }
  if (const auto* v = r.find("series.sweep")) c.series_sweep = parse_list("series.sweep", *v);
  if (const auto* v = r.find("series.terms")) {
    c.series_terms = static_cast<int>(parse_integer("series.terms", *v));
    if (c.series_terms < 0 || c.series_terms > 2) throw ConfigError("series.terms must be 0, 1 or 2");
  }
  if (const auto* v = r.find("series.transcription")) {
    const auto t = lower(trim(*v));
    if (t == "corrected") {
      c.transcription = Transcription::Corrected;
    } else if (t == "printed" || t == "as_printed") {
      c.transcription = Transcription::AsPrinted;
    } else {
      throw ConfigError("series.transcription must be corrected or printed");
    }
  }

  if (const auto* v = r.find("output.format")) {
    const auto f = lower(trim(*v));
    if (f == "csv") {
      c.format = OutputFormat::Csv;
    } else if (f == "json") {
      c.format = OutputFormat::Json;
    } else {
      throw ConfigError("output.format must be csv or json");
    }
  }
  if (const auto* v = r.find("output.path")) c.output_path = std::string(trim(*v));

  r.check_all_used();

  check_particle(c.particle1, 1);
  check_particle(c.particle2, 2);
  if (!(c.hbar > 0.0) || !std::isfinite(c.hbar)) throw ConfigError("system.hbar must be positive and finite");
  if (!(c.tol > 0.0 && c.tol <= 1e-2)) throw ConfigError("solve.tol must lie in (0, 1e-2]");
  if (c.n && *c.n < 0) throw ConfigError("solve.n must be non-negative");
  if (c.n_max && *c.n_max < 0) throw ConfigError("solve.n_max must be non-negative");
  validate(build_interaction(c));
  return c;
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  auto particle = [&](int index, const ParticleConfig& p) {
    const std::string prefix = "system.particle" + std::to_string(index) + ".";
    os << prefix << "mass = " << format_double(p.mass) << '\n';
    os << prefix << "kind = " << to_string(p.kind) << '\n';
    if (p.b) os << prefix << "b = " << format_double(*p.b) << '\n';
    if (p.beta) os << prefix << "beta = " << format_double(*p.beta) << '\n';
    if (p.eta) os << prefix << "eta = " << format_double(*p.eta) << '\n';
    if (!p.table.empty()) os << prefix << "table = " << p.table << '\n';
  };
  particle(1, c.particle1);
  particle(2, c.particle2);
  os << "system.hbar = " << format_double(c.hbar) << '\n';
  os << "interaction.kind = " << (c.interaction == InteractionKind::Delta ? "delta" : "coulomb") << '\n';
  os << "interaction.U0 = " << format_double(c.U0) << '\n';
  os << "interaction.alpha = " << format_double(c.alpha) << '\n';
  os << "interaction.delta = " << format_double(c.delta) << '\n';
  os << "solve.p0 = " << format_double(c.p0) << '\n';
  if (!c.p0_grid.empty()) os << "solve.p0_grid = " << join(c.p0_grid) << '\n';
  if (c.n) os << "solve.n = " << *c.n << '\n';
  if (c.n_max) os << "solve.n_max = " << *c.n_max << '\n';
  os << "solve.tol = " << format_double(c.tol) << '\n';
  os << "solve.grid_size = " << c.grid_size << '\n';
  os << "series.family = " << (c.series_family == SeriesFamily::Cutoff ? "cutoff" : "inversesqrt") << '\n';
  if (!c.series_sweep.empty()) os << "series.sweep = " << join(c.series_sweep) << '\n';
  os << "series.terms = " << c.series_terms << '\n';
  os << "series.transcription = " << (c.transcription == Transcription::Corrected ? "corrected" : "printed") << '\n';
  os << "output.format = " << (c.format == OutputFormat::Csv ? "csv" : "json") << '\n';
  if (!c.output_path.empty()) os << "output.path = " << c.output_path << '\n';
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

DeformationFamily build_family(const ParticleConfig& p) {
  switch (p.kind) {
    case DeformationKind::Cutoff:
      if (p.eta) return from_mass(MassScalingRule{*p.eta}, p.mass, p.kind);
      return DeformationFamily::cutoff(p.b.value_or(kInfinity));
    case DeformationKind::Kempf:
    case DeformationKind::InverseSqrt:
      if (p.eta) return from_mass(MassScalingRule{*p.eta}, p.mass, p.kind);
      return p.kind == DeformationKind::Kempf ? DeformationFamily::kempf(*p.beta)
                                              : DeformationFamily::inverse_sqrt(*p.beta);
    case DeformationKind::Custom: {
      std::vector<double> ps;
      std::vector<double> gs;
      std::istringstream in(read_file(p.table));
      std::string line;
      while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto comma = t.find(',');
        if (comma == std::string_view::npos) throw ConfigError("table '" + p.table + "': expected p,g rows");
        const auto first = trim(t.substr(0, comma));
        if (ps.empty() && gs.empty() && first == "p") continue;
        ps.push_back(parse_double("table", first));
        gs.push_back(parse_double("table", t.substr(comma + 1)));
      }
      return DeformationFamily::custom(std::move(ps), std::move(gs));
    }
  }
  throw ConfigError("unknown deformation kind");
}

} // namespace

TwoBodySystem build_system(const RunConfig& config) {
  return TwoBodySystem(Particle{config.particle1.mass, build_family(config.particle1)},
                       Particle{config.particle2.mass, build_family(config.particle2)}, config.hbar);
}

Interaction build_interaction(const RunConfig& config) {
  if (config.interaction == InteractionKind::Delta) return DeltaInteraction{config.U0};
  return CoulombInteraction{config.alpha, config.delta};
}

} // namespace minlen::cli
