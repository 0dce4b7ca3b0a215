#pragma once

// JSON and CSV serialization for witnesses, bound reports and check reports.

#include "maxdet/border_search.hpp"
#include "maxdet/bounds.hpp"
#include "maxdet/lemmas.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace maxdet {

using json = nlohmann::ordered_json;

inline std::string version_string() { return "0.1.0"; }

/// Decimal rendering of a log-scale value with 6 significant digits, e.g. "8.58650e-01".
inline std::string decimal_string(const LogScalar& x) {
  if (x.sign == 0)
    return "0";
  const double l10 = x.log_abs / std::log(10.0);
  double e = std::floor(l10);
  double mant = std::pow(10.0, l10 - e);
  if (mant >= 9.999995) {
    mant /= 10;
    e += 1;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.5fe%+03d", x.sign < 0 ? "-" : "", mant, static_cast<int>(e));
  return buf;
}

namespace detail {

inline std::vector<std::string> sign_rows(const SignMatrix& s) {
  std::vector<std::string> rows;
  rows.reserve(s.rows());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    std::string r(s.cols(), '+');
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (s(i, j) < 0)
        r[j] = '-';
    rows.push_back(std::move(r));
  }
  return rows;
}

inline SignMatrix parse_sign_rows(const json& rows, std::size_t nrows, std::size_t ncols, const char* what) {
  if (!rows.is_array() || rows.size() != nrows)
    throw witness_corrupt(std::string("witness field ") + what + " must hold " + std::to_string(nrows) + " rows");
  SignMatrix s(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    const std::string r = rows[i].get<std::string>();
    if (r.size() != ncols)
      throw witness_corrupt(std::string("witness field ") + what + " row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < ncols; ++j) {
      if (r[j] == '-')
        s.set(i, j, -1);
      else if (r[j] != '+')
        throw witness_corrupt(std::string("witness field ") + what + " has a character other than '+'/'-'");
    }
  }
  return s;
}

}  // namespace detail

/// Witness file: C is left out and recomputed from B on verification.
inline json witness_to_json(const Witness& w) {
  const LogScalar r = w.ratio_log == -INFINITY ? LogScalar::zero() : LogScalar::from_log(w.ratio_log);
  return json{{"n", w.n},
              {"m", w.m},
              {"d", w.d},
              {"kind", to_string(w.kind)},
              {"weight", w.weight},
              {"recipe", w.recipe},
              {"master_seed", w.master_seed},
              {"trial_index", w.trial_index},
              {"B", detail::sign_rows(w.B)},
              {"D", detail::sign_rows(w.D)},
              {"ratio_log", w.ratio_log == -INFINITY ? json(nullptr) : json(w.ratio_log)},
              {"ratio_decimal", decimal_string(r)}};
}

inline Witness witness_from_json(const json& j) {
  try {
    Witness w;
    w.n = j.at("n").get<std::size_t>();
    w.m = j.at("m").get<std::size_t>();
    w.d = j.at("d").get<std::size_t>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "hadamard")
      w.kind = MatrixKind::hadamard;
    else if (kind == "conference")
      w.kind = MatrixKind::conference;
    else
      throw witness_corrupt("witness kind must be hadamard or conference");
    w.weight = j.at("weight").get<std::int64_t>();
    w.recipe = j.at("recipe").get<std::string>();
    w.master_seed = j.at("master_seed").get<std::uint64_t>();
    w.trial_index = j.at("trial_index").get<std::uint64_t>();
    w.B = detail::parse_sign_rows(j.at("B"), w.m, w.d, "B");
    w.D = detail::parse_sign_rows(j.at("D"), w.d, w.d, "D");
    if (j.contains("C"))
      w.C = detail::parse_sign_rows(j.at("C"), w.d, w.m, "C");
    const auto& rl = j.at("ratio_log");
    w.ratio_log = rl.is_null() ? -INFINITY : rl.get<double>();
    return w;
  } catch (const json::exception& e) {
    throw witness_corrupt(std::string("malformed witness: ") + e.what());
  }
}

inline json bound_report_to_json(const BoundReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json row{{"name", e.name}, {"applicable", e.applicable}, {"target", to_string(e.target)}, {"reason", e.reason}};
    if (e.value) {
      row["value_log"] = e.value->log_abs;
      row["value_decimal"] = decimal_string(*e.value);
    }
    entries.push_back(std::move(row));
  }
  json ctx{{"n", r.ctx.n}, {"h", r.ctx.h}, {"d", r.ctx.d}, {"epsilon", r.ctx.epsilon}, {"delta", r.ctx.delta},
           {"c", r.ctx.c}};
  ctx["g_h"] = r.ctx.g_h ? json(*r.ctx.g_h) : json(nullptr);
  ctx["h0_d"] = r.ctx.h0_d ? json(*r.ctx.h0_d) : json(nullptr);
  return json{{"context", ctx}, {"bounds", entries}};
}

/// Columns: name, applicable, target, value_log, value_decimal.
inline std::string bound_report_to_csv(const BoundReport& r) {
  std::ostringstream out;
  out << "name,applicable,target,value_log,value_decimal\n";
  for (const auto& e : r.entries) {
    out << e.name << ',' << (e.applicable ? "true" : "false") << ',' << to_string(e.target) << ',';
    if (e.value) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", e.value->log_abs);
      out << buf << ',' << decimal_string(*e.value);
    } else {
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

inline json check_report_to_json(const CheckReport& r) {
  json out = json::object();
  for (const auto& [name, c] : r)
    out[name] = json{{"pass", c.pass}, {"fail", c.fail}, {"skip", c.skip}};
  return out;
}

}  // namespace maxdet
