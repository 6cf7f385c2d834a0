#include "canomat/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace canomat {

json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf") return inf;
    if (s == "-inf") return -inf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

namespace {

json real_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(number_to_json(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

Eigen::MatrixXd real_from_rows(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("matrix: expected a non-empty array of rows");
  const int n = static_cast<int>(rows.size());
  const int m = static_cast<int>(rows[0].size());
  Eigen::MatrixXd out(n, m);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != m) throw std::invalid_argument("matrix: ragged rows");
    for (int j = 0; j < m; ++j) out(i, j) = number_from_json(rows[i][j]);
  }
  return out;
}

json hermitian_list(const std::vector<HermitianMatrix>& v) {
  json a = json::array();
  for (const auto& h : v) a.push_back(matrix_to_json(h.mat()));
  return a;
}

json matrix_list(const std::vector<CMatrix>& v) {
  json a = json::array();
  for (const auto& h : v) a.push_back(matrix_to_json(h));
  return a;
}

std::vector<CMatrix> matrices_from(const json& a) {
  std::vector<CMatrix> out;
  for (const auto& e : a) out.push_back(matrix_from_json(e));
  return out;
}

std::vector<HermitianMatrix> hermitians_from(const json& a) {
  std::vector<HermitianMatrix> out;
  for (const auto& e : a) out.emplace_back(matrix_from_json(e));
  return out;
}

std::vector<double> doubles_from(const json& a) {
  std::vector<double> out;
  for (const auto& e : a) out.push_back(number_from_json(e));
  return out;
}

json doubles_to(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

json complex_to(cplx z) { return {{"re", number_to_json(z.real())}, {"im", number_to_json(z.imag())}}; }

json outliers_to(const std::vector<Outlier>& v) {
  json a = json::array();
  for (const auto& o : v) {
    json e = matrix_to_json(o.w.mat());
    a.push_back({{"x", number_to_json(o.x)}, {"w_re", e["re"]}, {"w_im", e["im"]}});
  }
  return a;
}

std::vector<Outlier> outliers_from(const json& j, const char* key) {
  std::vector<Outlier> out;
  if (!j.contains(key)) return out;
  for (const auto& a : j.at(key))
    out.push_back({number_from_json(a.at("x")), HermitianMatrix(matrix_from_json(a.at("w_re"), a.at("w_im")))});
  return out;
}

}  // namespace

json matrix_to_json(const CMatrix& m) { return {{"re", real_rows(m.real())}, {"im", real_rows(m.imag())}}; }

CMatrix matrix_from_json(const json& re, const json& im) {
  Eigen::MatrixXd r = real_from_rows(re), i = real_from_rows(im);
  if (r.rows() != i.rows() || r.cols() != i.cols()) throw std::invalid_argument("matrix: re/im shape mismatch");
  CMatrix out(r.rows(), r.cols());
  out.real() = r;
  out.imag() = i;
  return out;
}

CMatrix matrix_from_json(const json& j) { return matrix_from_json(j.at("re"), j.at("im")); }

json measure_to_json(const MatrixMeasure& m) {
  json j;
  j["$schema"] = kSchemaMeasure;
  j["dim"] = m.dim();
  json atoms = json::array();
  for (const auto& a : m.atoms()) {
    json w = matrix_to_json(a.w.mat());
    atoms.push_back({{"x", number_to_json(a.x)}, {"w_re", w["re"]}, {"w_im", w["im"]}});
  }
  j["atoms"] = atoms;
  if (m.ac()) {
    j["ac"] = {{"nodes", doubles_to(m.ac()->nodes)},
               {"quad_weights", doubles_to(m.ac()->quad_weights)},
               {"densities", hermitian_list(m.ac()->densities)}};
  }
  return j;
}

MatrixMeasure measure_from_json(const json& j) {
  const int p = j.at("dim").get<int>();
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms"))
    atoms.push_back({number_from_json(a.at("x")), HermitianMatrix(matrix_from_json(a.at("w_re"), a.at("w_im")))});
  std::optional<AcPart> ac;
  if (j.contains("ac") && !j.at("ac").is_null()) {
    const auto& c = j.at("ac");
    ac = AcPart{doubles_from(c.at("nodes")), doubles_from(c.at("quad_weights")), hermitians_from(c.at("densities"))};
  }
  return MatrixMeasure(p, std::move(atoms), std::move(ac));
}

json chain_to_json(const RecursionChain& c) {
  return {{"$schema", kSchemaRecursion},
          {"dim", c.p},
          {"depth", c.depth},
          {"gamma", hermitian_list(c.gamma)},
          {"u", matrix_list(c.u)},
          {"v", matrix_list(c.v)},
          {"B", hermitian_list(c.B)},
          {"A_tilde", matrix_list(c.A_tilde)},
          {"A", hermitian_list(c.A)}};
}

RecursionChain chain_from_json(const json& j) {
  auto gamma = hermitians_from(j.at("gamma"));
  if (gamma.empty()) throw std::invalid_argument("chain: empty gamma");
  return chain_from_monic(gamma.front(), matrices_from(j.at("u")), matrices_from(j.at("v")));
}

json canonical_to_json(const CanonicalChain& c) {
  return {{"$schema", kSchemaCanonical},
          {"dim", c.p},
          {"m", c.m},
          {"U_herm", hermitian_list(c.U_herm)},
          {"U", matrix_list(c.U)},
          {"zeta", matrix_list(c.zeta)},
          {"R", hermitian_list(c.R)},
          {"H", hermitian_list(c.H)},
          {"M_minus", hermitian_list(c.M_minus)},
          {"M_plus", hermitian_list(c.M_plus)}};
}

CanonicalChain canonical_from_json(const json& j) { return canonical_from_hermitian(hermitians_from(j.at("U_herm"))); }

json structured_to_json(const StructuredMeasure& s) {
  return {{"$schema", kSchemaStructured},
          {"dim", s.dim()},
          {"kappa1", number_to_json(s.kmk.kappa1)},
          {"kappa2", number_to_json(s.kmk.kappa2)},
          {"h_nodes", doubles_to(s.h_nodes)},
          {"h_quad_weights", doubles_to(s.h_quad_weights)},
          {"h_values", hermitian_list(s.h_values)},
          {"atoms_plus", outliers_to(s.atoms_plus)},
          {"atoms_minus", outliers_to(s.atoms_minus)}};
}

StructuredMeasure structured_from_json(const json& j, double kappa1, double kappa2) {
  double k1 = std::isnan(kappa1) ? number_from_json(j.at("kappa1")) : kappa1;
  double k2 = std::isnan(kappa2) ? number_from_json(j.at("kappa2")) : kappa2;
  StructuredMeasure s;
  s.kmk = kmk_params(k1, k2);
  s.h_nodes = doubles_from(j.at("h_nodes"));
  s.h_values = hermitians_from(j.at("h_values"));
  if (j.contains("h_quad_weights")) {
    s.h_quad_weights = doubles_from(j.at("h_quad_weights"));
  } else {
    // Without explicit weights the nodes must be the reference rule of the same size.
    auto rule = kmk_rule(s.kmk, static_cast<int>(s.h_nodes.size()));
    for (std::size_t i = 0; i < s.h_nodes.size(); ++i)
      if (std::abs(rule.nodes[i] - s.h_nodes[i]) > 1e-12)
        throw std::invalid_argument("structured measure: h_quad_weights missing and nodes are not the reference rule");
    s.h_quad_weights = rule.weights;
  }
  s.atoms_plus = outliers_from(j, "atoms_plus");
  s.atoms_minus = outliers_from(j, "atoms_minus");
  if (s.h_values.empty() && s.atoms_plus.empty() && s.atoms_minus.empty())
    throw std::invalid_argument("structured measure: empty");
  s.validate();
  return s;
}

json identity_reports_to_json(const std::vector<IdentityReport>& r) {
  json a = json::array();
  for (const auto& e : r)
    a.push_back({{"name", e.name},
                 {"lhs", complex_to(e.lhs)},
                 {"rhs", complex_to(e.rhs)},
                 {"residual", number_to_json(e.residual)},
                 {"tol", number_to_json(e.tol)},
                 {"pass", e.pass}});
  return {{"$schema", kSchemaIdentities}, {"reports", a}};
}

json sumrule_to_json(const SumRuleReport& r) {
  return {{"$schema", kSchemaSumRule},
          {"measure_side",
           {{"kl", number_to_json(r.measure.kl)},
            {"outliers_plus", number_to_json(r.measure.outliers_plus)},
            {"outliers_minus", number_to_json(r.measure.outliers_minus)},
            {"total", number_to_json(r.measure.total)}}},
          {"coefficient_side",
           {{"partial_sums", doubles_to(r.coefficients.partial_sums)},
            {"tail_estimate", number_to_json(r.coefficients.tail_estimate)},
            {"total", number_to_json(r.coefficients.total)},
            {"convergent", r.coefficients.convergent},
            {"truncation_depth", r.coefficients.truncation_depth}}},
          {"residual", number_to_json(r.residual)},
          {"truncation_depth", r.truncation_depth},
          {"tol", number_to_json(r.tol)},
          {"pass", r.pass}};
}

json mc_report_to_json(const McTestReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"label", c.label},
                     {"index", c.index},
                     {"statistic", c.statistic},
                     {"mean", number_to_json(c.mean)},
                     {"ref_mean", number_to_json(c.ref_mean)},
                     {"se", number_to_json(c.se)},
                     {"ref_se", number_to_json(c.ref_se)},
                     {"z", number_to_json(c.z)},
                     {"pass", c.pass}});
  json corr = json::array();
  for (const auto& row : r.correlations) corr.push_back(doubles_to(row));
  return {{"$schema", kSchemaMcTest},
          {"suite", r.suite},
          {"samples", r.samples},
          {"seed", r.seed},
          {"cells", cells},
          {"correlations", corr},
          {"corr_band", number_to_json(r.corr_band)},
          {"corr_pass", r.corr_pass},
          {"degeneracy_events", r.degeneracy_events},
          {"errors", doubles_to(r.errors)},
          {"trend_pass", r.trend_pass},
          {"pass", r.pass},
          {"seconds", number_to_json(r.seconds)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace canomat
