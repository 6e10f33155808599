#pragma once

// JSON and CSV serialization of spectrum tables, zero-mode tables, index
// curves, and verification reports. Floating-point fields are printed with
// 17 significant digits so that re-parsing reproduces the exact doubles.

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluxtube/ab.hpp"
#include "fluxtube/spectrum.hpp"

namespace fluxtube {

inline std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline Family family_from_name(const std::string& s) {
  for (Family f : {Family::LagA, Family::LagB, Family::SingDownLog,
                   Family::SingDown, Family::SingUpLog, Family::SingUp})
    if (s == family_name(f)) return f;
  throw std::invalid_argument("unknown family name: " + s);
}

inline const char* regime_name(AbRegime r) {
  switch (r) {
    case AbRegime::Normalizable: return "normalizable";
    case AbRegime::LogNormalized: return "log-normalized";
    case AbRegime::NonNormalizable: return "non-normalizable";
  }
  return "?";
}

// --- spectrum tables ------------------------------------------------------

inline nlohmann::json spectrum_to_json(const SpectrumTable& t) {
  nlohmann::json j;
  j["alpha"] = t.alpha;
  j["kappa"] = t.kappa;
  j["e_max"] = t.e_max;
  j["m_min"] = t.m_min;
  j["m_max"] = t.m_max;
  j["block_shift"] = t.block_shift;
  j["states"] = nlohmann::json::array();
  for (const auto& st : t.states)
    j["states"].push_back({{"family", family_name(st.family)},
                           {"sigma", st.channel.sigma()},
                           {"m", st.channel.m},
                           {"n", st.n},
                           {"E", st.energy}});
  j["vacancies"] = nlohmann::json::array();
  for (const auto& [down, up] : t.vacancies)
    j["vacancies"].push_back(
        {{"m_down", down.m}, {"m_up", up.m}, {"m_plus_sigma", down.m - 0.5}});
  return j;
}

namespace detail {

// exact integer bookkeeping of a parsed state: the alpha coefficient is a
// family property and the base recovers the ladder offset
inline EigenState rebuild_state(Family f, int m, int two_sigma, int n,
                                double energy) {
  EigenState st;
  st.family = f;
  st.channel = {m, two_sigma};
  st.n = n;
  st.e_flux_coeff = f == Family::LagA ? 1 : 0;
  st.e_base = is_singular(f) ? 0 : n + (two_sigma + 1) / 2;
  st.energy = energy;
  return st;
}

}  // namespace detail

inline SpectrumTable spectrum_from_json(const nlohmann::json& j) {
  SpectrumTable t;
  t.alpha = j.at("alpha").get<double>();
  t.kappa = j.at("kappa").get<double>();
  t.e_max = j.at("e_max").get<double>();
  t.m_min = j.at("m_min").get<int>();
  t.m_max = j.at("m_max").get<int>();
  t.block_shift = j.at("block_shift").get<double>();
  for (const auto& s : j.at("states"))
    t.states.push_back(detail::rebuild_state(
        family_from_name(s.at("family").get<std::string>()),
        s.at("m").get<int>(), s.at("sigma").get<double>() < 0 ? -1 : +1,
        s.at("n").get<int>(), s.at("E").get<double>()));
  for (const auto& v : j.at("vacancies"))
    t.vacancies.push_back({Channel{v.at("m_down").get<int>(), -1},
                           Channel{v.at("m_up").get<int>(), +1}});
  return t;
}

inline std::string spectrum_to_csv(const SpectrumTable& t) {
  std::ostringstream out;
  out << "# alpha=" << format_double(t.alpha) << " kappa="
      << format_double(t.kappa) << " e_max=" << format_double(t.e_max)
      << " m_min=" << t.m_min << " m_max=" << t.m_max
      << " block_shift=" << format_double(t.block_shift) << "\n";
  out << "m_plus_sigma,energy,family,sigma,m,n,is_vacancy\n";
  for (const auto& st : t.states)
    out << format_double(st.channel.m + st.channel.sigma()) << ','
        << format_double(st.energy) << ',' << family_name(st.family) << ','
        << format_double(st.channel.sigma()) << ',' << st.channel.m << ','
        << st.n << ",0\n";
  for (const auto& [down, up] : t.vacancies)
    out << format_double(down.m - 0.5) << ",,vacancy,," << down.m << ",,1\n";
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace detail

inline SpectrumTable spectrum_from_csv(const std::string& text) {
  SpectrumTable t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string kv;
      while (hs >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        std::string key = kv.substr(0, eq);
        std::string val = kv.substr(eq + 1);
        if (key == "alpha") t.alpha = std::stod(val);
        else if (key == "kappa") t.kappa = std::stod(val);
        else if (key == "e_max") t.e_max = std::stod(val);
        else if (key == "m_min") t.m_min = std::stoi(val);
        else if (key == "m_max") t.m_max = std::stoi(val);
        else if (key == "block_shift") t.block_shift = std::stod(val);
      }
      continue;
    }
    if (!have_header) {  // column header row
      have_header = true;
      continue;
    }
    auto cells = detail::split_csv_row(line);
    if (cells.size() != 7)
      throw std::invalid_argument("spectrum csv: malformed row: " + line);
    if (cells[6] == "1") {
      int m_down = std::stoi(cells[4]);
      t.vacancies.push_back({Channel{m_down, -1}, Channel{m_down - 1, +1}});
      continue;
    }
    t.states.push_back(detail::rebuild_state(
        family_from_name(cells[2]), std::stoi(cells[4]),
        std::stod(cells[3]) < 0 ? -1 : +1, std::stoi(cells[5]),
        std::stod(cells[1])));
  }
  return t;
}

// --- zero-mode tables and index curves -------------------------------------

inline nlohmann::json zero_modes_to_json(double alpha, double r_tube,
                                         const std::vector<AbZeroMode>& modes) {
  nlohmann::json j;
  j["alpha"] = alpha;
  j["r_tube"] = r_tube;
  j["index_ab"] = index_ab(alpha);
  j["index_singular"] = index_singular(alpha);
  j["modes"] = nlohmann::json::array();
  for (const auto& z : modes)
    j["modes"].push_back({{"sigma", z.channel.sigma()},
                          {"m", z.channel.m},
                          {"regime", regime_name(z.regime)},
                          {"nu", z.nu}});
  return j;
}

struct IndexRow {
  double alpha;
  int index_s;
  int index_ab;
};

inline std::string indices_to_csv(const std::vector<IndexRow>& rows) {
  std::ostringstream out;
  out << "alpha,index_singular,index_ab\n";
  for (const auto& r : rows)
    out << format_double(r.alpha) << ',' << r.index_s << ',' << r.index_ab
        << "\n";
  return out.str();
}

inline nlohmann::json indices_to_json(const std::vector<IndexRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"alpha", r.alpha},
                 {"index_singular", r.index_s},
                 {"index_ab", r.index_ab}});
  return j;
}

// --- verification reports ---------------------------------------------------

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline nlohmann::json report_to_json(const std::vector<CheckResult>& checks) {
  nlohmann::json j;
  j["checks"] = nlohmann::json::array();
  bool all = true;
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
    all = all && c.pass;
  }
  j["all_pass"] = all;
  return j;
}

}  // namespace fluxtube
