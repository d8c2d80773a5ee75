#include "config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "fermlap/potential.hpp"

namespace fermlap::cli {

namespace {

const std::set<std::string> kKeys{
    "A",        "n",          "D",        "mode",         "code",          "comparator",   "Q",
    "potential", "potential_kind", "strength", "softening", "center",       "include_diagonal",
    "kinetic_coefficient", "seed", "cap_qubits", "cap_basis", "out_dir", "sweep", "fault",
    "export_matrix", "spectral_tol", "gap_steps"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError("invalid value for " + key + ": '" + text + "'");
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + text + "'");
}

std::vector<long> parse_center(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<long>("center", trim(item)));
  return out;
}

}  // namespace

Settings read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Settings s;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key = value");
    s[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return s;
}

std::vector<unsigned> parse_range(const std::string& text) {
  std::vector<unsigned> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = parse_number<unsigned>("range", trim(text.substr(0, dots)));
    const auto hi = parse_number<unsigned>("range", trim(text.substr(dots + 2)));
    if (hi < lo) throw ConfigError("empty range '" + text + "'");
    for (unsigned v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<unsigned>("range", trim(item)));
  if (out.empty()) throw ConfigError("empty range");
  return out;
}

SweepRanges parse_sweep(const std::string& text, const ProblemSpec& base) {
  SweepRanges r{{base.A}, {base.n}, {base.D}};
  // Split on ';' or on ',' followed by a key.
  std::vector<std::string> parts;
  std::string current;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    const bool key_follows = c == ',' && k + 2 < text.size() && text[k + 2] == '=';
    if (c == ';' || key_follows) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  for (const auto& part : parts) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep entries look like n=2..4, got '" + part + "'");
    const auto key = trim(part.substr(0, eq));
    const auto values = parse_range(trim(part.substr(eq + 1)));
    if (key == "A") r.A = values;
    else if (key == "n") r.n = values;
    else if (key == "D") r.D = values;
    else throw ConfigError("unknown sweep axis '" + key + "'");
  }
  return r;
}

RunConfig make_run_config(const Settings& settings, SynthesisMode mode_default) {
  for (const auto& [k, v] : settings)
    if (!kKeys.count(k)) throw ConfigError("unknown config key '" + k + "'");
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = settings.find(k);
    return it == settings.end() ? nullptr : &it->second;
  };

  RunConfig rc;
  auto& s = rc.spec;
  if (auto v = get("A")) s.A = parse_number<unsigned>("A", *v);
  if (auto v = get("n")) s.n = parse_number<unsigned>("n", *v);
  if (auto v = get("D")) s.D = parse_number<unsigned>("D", *v);

  s.mode = mode_default;
  if (auto v = get("mode")) {
    if (*v == "inline") s.mode = SynthesisMode::inline_;
    else if (*v == "gadget") s.mode = SynthesisMode::gadget;
    else throw ConfigError("mode must be inline or gadget");
  }
  s.code = s.mode == SynthesisMode::gadget ? PositionCode::binary : PositionCode::brgc;
  if (auto v = get("code")) {
    if (*v == "binary") s.code = PositionCode::binary;
    else if (*v == "brgc") s.code = PositionCode::brgc;
    else throw ConfigError("code must be binary or brgc");
  }
  if (auto v = get("comparator")) {
    if (*v == "serial") s.comparator = ComparatorMode::serial;
    else if (*v == "tree") s.comparator = ComparatorMode::tree;
    else throw ConfigError("comparator must be serial or tree");
  }
  if (auto v = get("Q"); v && *v != "auto") s.Q = parse_number<double>("Q", *v);
  if (auto v = get("kinetic_coefficient")) s.kinetic_coefficient = parse_number<double>("kinetic_coefficient", *v);
  if (auto v = get("include_diagonal")) s.include_diagonal = parse_bool("include_diagonal", *v);
  if (auto v = get("seed")) s.seed = parse_number<std::uint64_t>("seed", *v);
  if (auto v = get("cap_qubits")) s.cap_qubits = parse_number<unsigned>("cap_qubits", *v);
  if (auto v = get("cap_basis")) s.cap_basis = parse_number<std::uint64_t>("cap_basis", *v);

  auto& p = s.potential;
  if (auto v = get("potential"); v && *v != "none") {
    p.builtin = *v;
    if (*v == "well" || *v == "harmonic") {
      p.kind = PotentialSpec::Kind::one_body;
    } else if (*v == "coulomb-softened") {
      p.kind = PotentialSpec::Kind::two_body;
    } else {
      p.builtin = "table";
      p.kind = PotentialSpec::Kind::one_body;
      if (auto k = get("potential_kind")) {
        if (*k == "two_body") p.kind = PotentialSpec::Kind::two_body;
        else if (*k != "one_body") throw ConfigError("potential_kind must be one_body or two_body");
      }
      try {
        s.validate();
        const std::uint64_t N = s.sites();
        const std::size_t length = p.kind == PotentialSpec::Kind::one_body ? N : N * N;
        p.table = load_potential_table(*v, length);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (auto v = get("strength")) p.strength = parse_number<double>("strength", *v);
  if (auto v = get("softening")) p.softening = parse_number<double>("softening", *v);
  if (auto v = get("center")) p.center = parse_center(*v);
  if (p.kind != PotentialSpec::Kind::none && p.center.empty()) p.center.assign(s.D, 0);

  if (auto v = get("out_dir")) rc.out_dir = *v;
  if (auto v = get("sweep")) rc.sweep = *v;
  if (auto v = get("fault")) {
    if (*v == "flip-relocation-sign") rc.flip_relocation_sign = true;
    else if (*v != "none") throw ConfigError("unknown fault '" + *v + "'");
  }
  if (auto v = get("export_matrix")) rc.export_matrix = parse_bool("export_matrix", *v);
  if (auto v = get("spectral_tol")) rc.spectral_tol = parse_number<double>("spectral_tol", *v);
  if (auto v = get("gap_steps")) rc.gap_steps = parse_number<std::size_t>("gap_steps", *v);

  try {
    s.validate();
    one_body_table(s);
    two_body_table(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return rc;
}

}  // namespace fermlap::cli
