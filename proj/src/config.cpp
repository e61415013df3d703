#include "wt/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wt {

namespace {

struct RawValue {
  std::string text;
  int line;
};

using Section = std::map<std::string, RawValue>;
using Document = std::map<std::string, Section>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Document parse_document(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config parse error at line " +
                                    std::to_string(lineno) +
                                    ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::invalid_argument("config parse error at line " +
                                    std::to_string(lineno) +
                                    ": empty section name");
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config parse error at line " +
                                  std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config parse error at line " +
                                  std::to_string(lineno) +
                                  ": empty key or value");
    if (section.empty())
      throw std::invalid_argument("config parse error at line " +
                                  std::to_string(lineno) +
                                  ": key outside any [section]");
    if (!doc[section].emplace(key, RawValue{value, lineno}).second)
      throw std::invalid_argument("config parse error at line " +
                                  std::to_string(lineno) + ": duplicate key '" +
                                  key + "'");
  }
  return doc;
}

[[noreturn]] void fail(const RawValue& v, const std::string& what) {
  throw std::invalid_argument("config error at line " + std::to_string(v.line) +
                              ": " + what);
}

class SectionReader {
 public:
  SectionReader(Document& doc, std::string name) : name_(std::move(name)) {
    auto it = doc.find(name_);
    if (it != doc.end()) section_ = &it->second;
  }

  ~SectionReader() = default;

  void finish() const {
    if (!section_) return;
    for (const auto& [key, value] : *section_)
      if (!consumed_.count(key))
        fail(value, "unknown key '" + key + "' in section [" + name_ + "]");
  }

  const RawValue* raw(const std::string& key) {
    consumed_.insert(key);
    if (!section_) return nullptr;
    auto it = section_->find(key);
    return it == section_->end() ? nullptr : &it->second;
  }

  void read(const std::string& key, std::string& out,
            const std::vector<std::string>& allowed = {}) {
    const RawValue* v = raw(key);
    if (!v) return;
    if (!allowed.empty() &&
        std::find(allowed.begin(), allowed.end(), v->text) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(*v, "'" + key + "' must be one of {" + list + "}");
    }
    out = v->text;
  }

  void read(const std::string& key, bool& out) {
    const RawValue* v = raw(key);
    if (!v) return;
    if (v->text == "true" || v->text == "1")
      out = true;
    else if (v->text == "false" || v->text == "0")
      out = false;
    else
      fail(*v, "'" + key + "' must be true or false");
  }

  void read(const std::string& key, double& out,
            double lo = -std::numeric_limits<double>::infinity(),
            double hi = std::numeric_limits<double>::infinity()) {
    const RawValue* v = raw(key);
    if (!v) return;
    char* end = nullptr;
    const double val = std::strtod(v->text.c_str(), &end);
    if (end != v->text.c_str() + v->text.size() || !std::isfinite(val))
      fail(*v, "'" + key + "' must be a finite number");
    if (val < lo || val > hi)
      fail(*v, "'" + key + "' out of range [" + std::to_string(lo) + ", " +
                   std::to_string(hi) + "]");
    out = val;
  }

  void read(const std::string& key, int& out, int lo, int hi) {
    double d = out;
    read(key, d, lo, hi);
    if (d != std::floor(d)) {
      const RawValue* v = raw(key);
      fail(*v, "'" + key + "' must be an integer");
    }
    out = static_cast<int>(d);
  }

  void read(const std::string& key, std::uint64_t& out) {
    const RawValue* v = raw(key);
    if (!v) return;
    try {
      out = std::stoull(v->text);
    } catch (...) {
      fail(*v, "'" + key + "' must be a non-negative integer");
    }
  }

  void read_list(const std::string& key, std::vector<double>& out, double lo,
                 double hi) {
    const RawValue* v = raw(key);
    if (!v) return;
    std::vector<double> vals;
    std::istringstream in(v->text);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      char* end = nullptr;
      const double val = std::strtod(item.c_str(), &end);
      if (item.empty() || end != item.c_str() + item.size())
        fail(*v, "'" + key + "' must be a comma-separated number list");
      if (val < lo || val > hi) fail(*v, "'" + key + "' entry out of range");
      vals.push_back(val);
    }
    if (vals.empty()) fail(*v, "'" + key + "' must not be empty");
    out = std::move(vals);
  }

 private:
  std::string name_;
  Section* section_ = nullptr;
  std::set<std::string> consumed_;
};

} // namespace

ExperimentConfig validate_config(const std::string& text) {
  Document doc = parse_document(text);
  ExperimentConfig cfg;

  {
    SectionReader s(doc, "experiment");
    s.read("kind", cfg.kind,
           {"mc-kinetic-3w", "mc-kinetic-4w", "perturbation-scaling",
            "onemode-pdf", "pbp-triad", "kz-flux-scan"});
    s.read("seed", cfg.seed);
    s.read("output_dir", cfg.output_dir);
    s.read("reproducible", cfg.reproducible);
    s.read("workers", cfg.workers, 0, 4096);
    s.finish();
  }
  if (cfg.kind.empty())
    throw std::invalid_argument(
        "config error: missing required key 'kind' in section [experiment]");
  {
    SectionReader s(doc, "lattice");
    s.read("d", cfg.dim, 1, 3);
    s.read("n_side", cfg.n_side, 2, 4096);
    s.read("L", cfg.box_length, 1e-12, 1e12);
    s.finish();
  }
  {
    SectionReader s(doc, "system");
    s.read("kind", cfg.system_kind,
           {"capillary", "rossby", "nls", "gravity", "acoustic"});
    s.read("sigma", cfg.sigma, 1e-12, 1e12);
    s.read("beta", cfg.beta, -1e12, 1e12);
    s.read("rho", cfg.rho, 1e-12, 1e12);
    s.read("g", cfg.g, 1e-12, 1e12);
    s.read("c", cfg.sound_speed, 1e-12, 1e12);
    s.read("v0", cfg.coupling_v0, -1e12, 1e12);
    s.read("epsilon", cfg.epsilon, 1e-12, 10.0);
    s.finish();
  }
  {
    SectionReader s(doc, "ensemble");
    s.read("R", cfg.realizations, 2, 10'000'000);
    s.read("amplitude_law", cfg.amplitude_law,
           {"deterministic-level", "rayleigh"});
    s.finish();
  }
  {
    SectionReader s(doc, "spectrum");
    s.read("kind", cfg.spectrum,
           {"flat", "gauss-bump", "thermal", "thermal-comb"});
    s.read("n0", cfg.n0, 0.0, 1e12);
    s.read("k0", cfg.k0, 0.0, 1e12);
    s.read("kwidth", cfg.kwidth, 1e-12, 1e12);
    s.read("T_eq", cfg.t_eq, 1e-12, 1e12);
    s.finish();
  }
  {
    SectionReader s(doc, "time");
    s.read("T", cfg.horizon, 0.0, 1e12);
    s.read("dt", cfg.dt, 0.0, 1e12);
    s.finish();
  }
  {
    SectionReader s(doc, "kinetics");
    s.read("kernel", cfg.delta_kernel, {"window", "triangular", "lorentzian"});
    s.read("delta_omega", cfg.delta_omega, 0.0, 1e12);
    s.read("forcing_rate", cfg.forcing_rate, 0.0, 1e12);
    s.read("kinetic_time", cfg.kinetic_time, 0.0, 1e12);
    s.finish();
  }
  {
    SectionReader s(doc, "perturbation");
    s.read("expansion", cfg.expansion, {"3w", "4w"});
    s.read_list("eps", cfg.eps_values, 1e-12, 1.0);
    s.read("T", cfg.pert_window, 1e-12, 1e12);
    s.finish();
  }
  {
    SectionReader s(doc, "onemode");
    s.read("n", cfg.level, 1e-12, 1e12);
    s.read("eta", cfg.eta, 1e-12, 1e12);
    s.read("F", cfg.flux, -1e12, 1e12);
    s.read("s_nl", cfg.s_nl, 0.0, 1e12);
    s.read("cells", cfg.cells, 8, 100000);
    s.finish();
  }
  {
    SectionReader s(doc, "pbp");
    s.read("cells", cfg.pbp_cells, 8, 256);
    s.read("omega1", cfg.omega1, 1e-12, 1e12);
    s.read("omega2", cfg.omega2, 1e-12, 1e12);
    s.finish();
  }
  for (const auto& [name, _] : doc) {
    static const char* known[] = {"experiment", "lattice", "system",
                                  "ensemble",   "spectrum", "time",
                                  "kinetics",   "perturbation", "onemode",
                                  "pbp"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return name == k;
        }) == std::end(known))
      throw std::invalid_argument("config error: unknown section [" + name +
                                  "]");
  }

  if (cfg.kind == "mc-kinetic-3w" || cfg.kind == "mc-kinetic-4w") {
    if (cfg.realizations < 2)
      throw std::invalid_argument(
          "config error: ensemble R must be >= 2 for Monte-Carlo experiments");
    const bool four = cfg.kind == "mc-kinetic-4w";
    if (four && cfg.system_kind != "nls")
      throw std::invalid_argument(
          "config error: mc-kinetic-4w requires a four-wave system (nls)");
    if (!four && (cfg.system_kind == "nls"))
      throw std::invalid_argument(
          "config error: mc-kinetic-3w requires a three-wave system");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::invalid_argument("config error: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return validate_config(ss.str());
}

std::string canonical_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "[experiment]\nkind = " << c.kind << "\nseed = " << c.seed
     << "\noutput_dir = " << c.output_dir
     << "\nreproducible = " << (c.reproducible ? "true" : "false")
     << "\nworkers = " << c.workers << "\n[lattice]\nd = " << c.dim
     << "\nn_side = " << c.n_side << "\nL = " << c.box_length
     << "\n[system]\nkind = " << c.system_kind << "\nsigma = " << c.sigma
     << "\nbeta = " << c.beta << "\nrho = " << c.rho << "\ng = " << c.g
     << "\nc = " << c.sound_speed << "\nv0 = " << c.coupling_v0
     << "\nepsilon = " << c.epsilon << "\n[ensemble]\nR = " << c.realizations
     << "\namplitude_law = " << c.amplitude_law
     << "\n[spectrum]\nkind = " << c.spectrum << "\nn0 = " << c.n0
     << "\nk0 = " << c.k0 << "\nkwidth = " << c.kwidth << "\nT_eq = " << c.t_eq
     << "\n[time]\nT = " << c.horizon << "\ndt = " << c.dt
     << "\n[kinetics]\nkernel = " << c.delta_kernel
     << "\ndelta_omega = " << c.delta_omega
     << "\nforcing_rate = " << c.forcing_rate
     << "\nkinetic_time = " << c.kinetic_time
     << "\n[perturbation]\nexpansion = " << c.expansion << "\neps =";
  for (std::size_t i = 0; i < c.eps_values.size(); ++i)
    os << (i ? "," : " ") << c.eps_values[i];
  os << "\nT = " << c.pert_window << "\n[onemode]\nn = " << c.level
     << "\neta = " << c.eta << "\nF = " << c.flux << "\ns_nl = " << c.s_nl
     << "\ncells = " << c.cells << "\n[pbp]\ncells = " << c.pbp_cells
     << "\nomega1 = " << c.omega1 << "\nomega2 = " << c.omega2 << "\n";
  return os.str();
}

} // namespace wt
