#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "jre/audit.hpp"
#include "jre/ensembles.hpp"
#include "jre/linalg.hpp"

namespace jre {

using Json = nlohmann::ordered_json;

/// Raised for malformed tuple files; the message names the offending field.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json vector_to_json(const ComplexVector &v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i)
    out.push_back(complex_to_json(v(i)));
  return out;
}

/// {"d": .., "dim": .., "operators": [d x dim x dim x [re, im]]}, row-major.
inline Json tuple_to_json(const OperatorTuple &t) {
  Json ops = Json::array();
  for (const auto &m : t) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (Index j = 0; j < m.cols(); ++j)
        row.push_back(complex_to_json(m(i, j)));
      rows.push_back(std::move(row));
    }
    ops.push_back(std::move(rows));
  }
  return Json{{"d", t.size()}, {"dim", t.dim()}, {"operators", std::move(ops)}};
}

namespace detail {

inline double finite_number(const Json &j, const std::string &where) {
  if (!j.is_number())
    throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw ParseError(where + ": not finite");
  return v;
}

inline long long positive_int(const Json &doc, const char *key) {
  if (!doc.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  const Json &j = doc.at(key);
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw ParseError(std::string("field '") + key +
                     "': expected a positive integer");
  return j.get<long long>();
}

} // namespace detail

inline OperatorTuple tuple_from_json(const Json &doc) {
  if (!doc.is_object())
    throw ParseError("top level: expected an object");
  const long long d = detail::positive_int(doc, "d");
  const long long dim = detail::positive_int(doc, "dim");
  if (!doc.contains("operators"))
    throw ParseError("missing field 'operators'");
  const Json &ops = doc.at("operators");
  if (!ops.is_array() || static_cast<long long>(ops.size()) != d)
    throw ParseError("field 'operators': expected an array of length d = " +
                     std::to_string(d));
  std::vector<ComplexMatrix> mats;
  for (long long k = 0; k < d; ++k) {
    const std::string at = "operators[" + std::to_string(k) + "]";
    const Json &rows = ops[static_cast<std::size_t>(k)];
    if (!rows.is_array() || static_cast<long long>(rows.size()) != dim)
      throw ParseError(at + ": expected " + std::to_string(dim) + " rows");
    ComplexMatrix m(dim, dim);
    for (long long i = 0; i < dim; ++i) {
      const std::string at_i = at + "[" + std::to_string(i) + "]";
      const Json &row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<long long>(row.size()) != dim)
        throw ParseError(at_i + ": expected " + std::to_string(dim) + " entries");
      for (long long j = 0; j < dim; ++j) {
        const std::string at_ij = at_i + "[" + std::to_string(j) + "]";
        const Json &z = row[static_cast<std::size_t>(j)];
        if (!z.is_array() || z.size() != 2)
          throw ParseError(at_ij + ": expected [re, im]");
        m(i, j) = Complex(detail::finite_number(z[0], at_ij + "[0]"),
                          detail::finite_number(z[1], at_ij + "[1]"));
      }
    }
    mats.push_back(std::move(m));
  }
  return OperatorTuple(std::move(mats));
}

inline OperatorTuple parse_tuple(const std::string &text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return tuple_from_json(doc);
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

inline OperatorTuple load_tuple(const std::string &path) {
  return parse_tuple(read_file(path));
}

inline void save_tuple(const std::string &path, const OperatorTuple &t) {
  write_file(path, tuple_to_json(t).dump(2) + "\n");
}

inline std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline Json summary_to_json(const Summary &s) {
  return Json{{"pass", s.pass},
              {"pass_tol", s.pass_tol},
              {"fail", s.fail},
              {"inconclusive", s.inconclusive},
              {"skipped", s.skipped}};
}

/// Report document. `generated_at` is the only field that varies between
/// identical invocations.
inline Json report_to_json(const AuditReport &rep, bool emit_witness,
                           const std::string &generated_at = utc_timestamp()) {
  Json ens{{"kind", to_string(rep.spec.kind)},
           {"n", rep.spec.n},
           {"d", rep.spec.d}};
  if (rep.spec.case_id)
    ens["case"] = to_string(*rep.spec.case_id);
  else
    ens["case"] = nullptr;

  Json results = Json::array();
  for (const auto &r : rep.results) {
    Json j{{"trial", r.trial},
           {"check_id", r.check_id},
           {"status", to_string(r.status)},
           {"lhs", r.lhs},
           {"rhs", r.rhs},
           {"slack", r.slack},
           {"tolerance", r.tolerance},
           {"escalations", r.escalations},
           {"diagnostics", r.diagnostics}};
    if (emit_witness) {
      Json w = Json::object();
      for (const auto &[label, v] : r.witnesses)
        w[label] = vector_to_json(v.coords());
      j["witness"] = std::move(w);
    }
    results.push_back(std::move(j));
  }

  return Json{{"seed", rep.spec.seed},
              {"ensemble", std::move(ens)},
              {"trials", rep.trials},
              {"tolerance", rep.tolerance},
              {"optimizer",
               {{"restarts", rep.optimizer.restarts},
                {"max_iters", rep.optimizer.max_iters},
                {"grad_tol", rep.optimizer.grad_tol},
                {"step_init", rep.optimizer.step_init},
                {"armijo_c", rep.optimizer.armijo_c},
                {"seed", rep.optimizer.seed}}},
              {"checks", rep.checks},
              {"generated_at", generated_at},
              {"results", std::move(results)},
              {"summary", summary_to_json(rep.summary)}};
}

} // namespace jre
