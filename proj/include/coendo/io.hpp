#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coendo/fixtures.hpp"
#include "coendo/idempotent.hpp"
#include "json.hpp"

namespace coendo::io {

using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Whole file, or stdin for "-".
inline std::string slurp(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string digest(const std::vector<std::string>& parts) {
  uint64_t h = 1469598103934665603ULL;
  for (const auto& s : parts) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline FieldSpec field_of(const json& doc) {
  if (!doc.contains("field")) throw ParseError("missing \"field\"");
  const auto& f = doc["field"];
  if (f.is_string() && (f == "Q" || f == "q")) return FieldSpec::rationals();
  if (f.is_number_integer()) {
    long long p = f.get<long long>();
    if (p < 2 || p >= (1LL << 31) || !is_prime(static_cast<uint64_t>(p)))
      throw ParseError("field must be a prime below 2^31 or \"Q\"");
    return FieldSpec::prime(static_cast<uint32_t>(p));
  }
  throw ParseError("field must be a prime or \"Q\"");
}

template <class F>
typename F::E scalar(const F& f, const json& x, const std::string& where) {
  if (x.is_number_integer()) return f.from_int(x.get<long long>());
  if (x.is_string()) {
    try {
      return f.parse(x.get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(where + ": bad scalar \"" + x.get<std::string>() + "\"");
    }
  }
  throw ParseError(where + ": scalars are integers or \"a/b\" strings");
}

template <class F>
json scalar_json(const F& f, const typename F::E& e) {
  if constexpr (std::is_same_v<F, Fp>)
    return e;
  else
    return f.str(e);
}

template <class F>
Vec<F> vector(const F& f, const json& x, int n, const std::string& where) {
  if (!x.is_array() || static_cast<int>(x.size()) != n)
    throw ParseError(where + ": expected a vector of length " + std::to_string(n));
  Vec<F> v;
  for (int i = 0; i < n; ++i) v.push_back(scalar(f, x[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

// Row-major matrix.
template <class F>
Mat<F> matrix(const F& f, const json& x, int rows, int cols, const std::string& where) {
  if (!x.is_array() || static_cast<int>(x.size()) != rows)
    throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
  Mat<F> m(f, rows, cols);
  for (int i = 0; i < rows; ++i) {
    Vec<F> r = vector(f, x[i], cols, where + "[" + std::to_string(i) + "]");
    for (int j = 0; j < cols; ++j) m(i, j) = r[j];
  }
  return m;
}

template <class F>
json matrix_json(const Mat<F>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m.field(), m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// {"dim", "labels"?, "mult": mult[i][j] = coordinates of e_i e_j, "unit"}
template <class F>
FinAlgebra<F> algebra(const F& f, const json& x, const std::string& name) {
  if (!x.is_object()) throw ParseError(name + ": expected an object");
  if (!x.contains("dim") || !x["dim"].is_number_integer()) throw ParseError(name + ": missing integer \"dim\"");
  const int n = x["dim"].get<int>();
  if (n < 1) throw ParseError(name + ": dim must be positive");
  FinAlgebra<F> a(f, n);
  if (x.contains("labels")) {
    const auto& l = x["labels"];
    if (!l.is_array() || static_cast<int>(l.size()) != n) throw ParseError(name + ": need " + std::to_string(n) + " labels");
    for (int i = 0; i < n; ++i) a.labels[i] = l[i].get<std::string>();
  }
  if (!x.contains("mult")) throw ParseError(name + ": missing \"mult\"");
  const auto& m = x["mult"];
  if (!m.is_array() || static_cast<int>(m.size()) != n) throw ParseError(name + ".mult: expected " + std::to_string(n) + " rows");
  for (int i = 0; i < n; ++i) {
    if (!m[i].is_array() || static_cast<int>(m[i].size()) != n)
      throw ParseError(name + ".mult[" + std::to_string(i) + "]: expected " + std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) {
      const std::string where = name + ".mult[" + std::to_string(i) + "][" + std::to_string(j) + "] (" + a.labels[i] +
                                "*" + a.labels[j] + ")";
      a.prod[i][j] = to_sparse(f, vector(f, m[i][j], n, where));
    }
  }
  if (!x.contains("unit")) throw ParseError(name + ": missing \"unit\"");
  a.unit = vector(f, x["unit"], n, name + ".unit");
  if (auto err = a.validate()) throw ParseError(name + ": " + *err);
  return a;
}

template <class F>
RRingExt<F> ring_extension(const F& f, const json& doc) {
  if (!doc.contains("R")) throw ParseError("missing \"R\"");
  auto R = std::make_shared<const FinAlgebra<F>>(algebra(f, doc["R"], "R"));
  if (doc.value("trivial-extension-of-R", false)) {
    if (doc.contains("A")) throw ParseError("\"A\" given together with \"trivial-extension-of-R\"");
    return fixtures::trivial_extension<F>(R);
  }
  if (!doc.contains("A")) throw ParseError("missing \"A\" (or \"trivial-extension-of-R\": true)");
  RRingExt<F> ext;
  ext.R = R;
  ext.A = std::make_shared<const FinAlgebra<F>>(algebra(f, doc["A"], "A"));
  if (!doc.contains("unit_map")) throw ParseError("missing \"unit_map\"");
  ext.u = matrix(f, doc["unit_map"], ext.A->n, R->n, "unit_map");
  if (auto err = ext.validate()) throw ParseError(*err);
  return ext;
}

// {"scope": "k" | "R", "dims": [...], "diff": [d_0: V_1 -> V_0, ...],
//  "action": [[e_k on V_n]...] or "base_change": true when scope is R}
template <class F>
ChainComplex<F> complex(const F& f, const json& doc, const AlgPtr<F>& R) {
  const std::string scope = doc.value("scope", std::string("k"));
  if (scope != "k" && scope != "R") throw ParseError("scope must be \"k\" or \"R\"");
  if (!doc.contains("dims") || !doc["dims"].is_array()) throw ParseError("missing \"dims\"");
  std::vector<int> dims;
  for (const auto& d : doc["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 0) throw ParseError("dims must be nonnegative integers");
    dims.push_back(d.get<int>());
  }
  const int top = static_cast<int>(dims.size()) - 1;
  std::vector<Mat<F>> diff;
  const json empty = json::array();
  const json& dj = doc.contains("diff") ? doc["diff"] : empty;
  if (top >= 0 && static_cast<int>(dj.size()) != top)
    throw ParseError("expected " + std::to_string(top) + " differentials, got " + std::to_string(dj.size()));
  for (int n = 0; n < top; ++n) diff.push_back(matrix(f, dj[n], dims[n], dims[n + 1], "diff[" + std::to_string(n) + "]"));
  auto k = std::make_shared<const FinAlgebra<F>>(fixtures::ground(f));
  ChainComplex<F> V = ChainComplex<F>::over_ground(k, dims, diff);
  if (scope == "R") {
    if (doc.value("base_change", false)) {
      V = base_change(R, V);
    } else {
      if (!doc.contains("action")) throw ParseError("scope R needs \"action\" or \"base_change\"");
      const auto& aj = doc["action"];
      if (!aj.is_array() || static_cast<int>(aj.size()) != top + 1) throw ParseError("action: one entry per degree");
      V.R = R;
      V.act.clear();
      for (int n = 0; n <= top; ++n) {
        if (!aj[n].is_array() || static_cast<int>(aj[n].size()) != R->n)
          throw ParseError("action[" + std::to_string(n) + "]: one matrix per basis element of R");
        std::vector<Mat<F>> acts;
        for (int j = 0; j < R->n; ++j)
          acts.push_back(matrix(f, aj[n][j], dims[n], dims[n], "action[" + std::to_string(n) + "][" + std::to_string(j) + "]"));
        V.act.push_back(acts);
      }
    }
  }
  if (auto err = V.validate()) throw ParseError("complex: " + *err);
  return V;
}

}  // namespace coendo::io
