#include "nck/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nck {

namespace {

json complex_json(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

std::string sign_char(int s) { return s > 0 ? "+" : "-"; }

}  // namespace

json to_json(const TorusElement& a) {
  json out = json::array();
  for (const auto& [m, c] : a.coeffs()) out.push_back(json{{"m", m.m}, {"re", c.real()}, {"im", c.imag()}});
  return out;
}

TorusElement element_from_json(const json& j, int n) {
  if (!j.is_array()) throw std::invalid_argument("torus element must be a JSON list");
  TorusElement out(n);
  for (const auto& term : j) {
    if (!term.is_object() || !term.contains("m"))
      throw std::invalid_argument("torus element term needs an \"m\" field");
    auto m = term.at("m").get<std::vector<int>>();
    if (static_cast<int>(m.size()) != n)
      throw std::invalid_argument("exponent has length " + std::to_string(m.size()) + ", expected " +
                                  std::to_string(n));
    const double re = term.value("re", 0.0);
    const double im = term.value("im", 0.0);
    out.add_term(Exponent(std::move(m)), Complex(re, im));
  }
  return out;
}

json to_json(const ThetaMatrix& theta) {
  json rows = json::array();
  for (int j = 1; j <= theta.n(); ++j) {
    json row = json::array();
    for (int k = 1; k <= theta.n(); ++k) row.push_back(theta(j, k));
    rows.push_back(row);
  }
  return json{{"n", theta.n()}, {"theta", rows}};
}

ThetaMatrix theta_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const auto rows = j.at("theta").get<std::vector<std::vector<double>>>();
    return ThetaMatrix::from_upper(n, rows);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed theta file: ") + e.what());
  }
}

json to_json(const NCDiffOp& op) {
  json out = json::array();
  for (const auto& alpha : op.multi_indices()) {
    json mat = json::array();
    for (int i = 0; i < op.m(); ++i) {
      json row = json::array();
      for (int k = 0; k < op.m(); ++k) row.push_back(to_json(op.entry(alpha, i, k)));
      mat.push_back(row);
    }
    out.push_back(json{{"alpha", alpha}, {"matrix", mat}});
  }
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    out.push_back(row);
  }
  return out;
}

json to_json(const SignTriple& s) {
  return json{{"eps", sign_char(s.eps)}, {"eps_prime", sign_char(s.eps_prime)},
              {"eps_dprime", sign_char(s.eps_dprime)}};
}

json to_json(const GammaRep& rep) {
  json gammas = json::array();
  for (const auto& g : rep.gammas) gammas.push_back(to_json(g));
  return json{{"n", rep.n},          {"N", rep.N},
              {"gammas", gammas},    {"sigma", to_json(rep.sigma)},
              {"conj_plus", to_json(rep.conj_plus)}, {"conj_minus", to_json(rep.conj_minus)}};
}

json to_json(const Connection& c) {
  json A = json::array();
  for (const auto& mat : c.A) {
    json rows = json::array();
    for (const auto& row : mat) {
      json r = json::array();
      for (const auto& e : row) r.push_back(to_json(e));
      rows.push_back(r);
    }
    A.push_back(rows);
  }
  return json{{"m", c.m}, {"A", A}};
}

Connection connection_from_json(const json& j, int torus_dim) {
  try {
    Connection c;
    c.m = j.at("m").get<int>();
    if (c.m < 1) throw std::invalid_argument("connection rank must be >= 1");
    for (const auto& mat : j.at("A")) {
      ElementMatrix A;
      for (const auto& row : mat) {
        std::vector<TorusElement> r;
        for (const auto& e : row) r.push_back(element_from_json(e, torus_dim));
        if (static_cast<int>(r.size()) != c.m)
          throw std::invalid_argument("connection matrix row has wrong length");
        A.push_back(std::move(r));
      }
      if (static_cast<int>(A.size()) != c.m)
        throw std::invalid_argument("connection matrix has wrong number of rows");
      c.A.push_back(std::move(A));
    }
    if (static_cast<int>(c.A.size()) != torus_dim / 2)
      throw std::invalid_argument("connection needs " + std::to_string(torus_dim / 2) +
                                  " matrices for a torus of dimension " +
                                  std::to_string(torus_dim));
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed connection file: ") + e.what());
  }
}

json checks_to_json(const VerificationReport& report) {
  json out = json::array();
  for (const auto& c : report.checks())
    out.push_back(json{{"name", c.name}, {"residual", c.residual}, {"pass", c.pass}});
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("cannot parse " + path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename into " + path + ": " + ec.message());
  }
}

}  // namespace nck
