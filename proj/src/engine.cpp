#include "irm/engine.hpp"

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

namespace irm {

namespace {

GeneratorSpec parse_single_spec(const std::string& token) {
  std::string name = token;
  double param = 1.0;
  bool has_param = false;
  if (const auto colon = token.find(':'); colon != std::string::npos) {
    name = token.substr(0, colon);
    const std::string value = token.substr(colon + 1);
    char* end = nullptr;
    param = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size())
      throw std::invalid_argument("bad generator parameter: " + token);
    has_param = true;
  }
  GeneratorSpec spec;
  spec.param = param;
  if (name == "r" || name == "current-residual") {
    spec.kind = GeneratorKind::current_residual;
    if (has_param) throw std::invalid_argument("current-residual takes no parameter");
  } else if (name == "p" || name == "previous-increment") {
    spec.kind = GeneratorKind::previous_increment;
    if (has_param) throw std::invalid_argument("previous-increment takes no parameter");
  } else if (name == "jacobi") {
    spec.kind = GeneratorKind::jacobi;
    if (has_param) throw std::invalid_argument("jacobi takes no parameter");
  } else if (name == "sor-forward") {
    spec.kind = GeneratorKind::sor_forward;
    if (has_param && (param <= 0.0 || param >= 2.0)) throw std::invalid_argument("SOR sweep factor must lie in (0,2)");
  } else if (name == "sor-backward") {
    spec.kind = GeneratorKind::sor_backward;
    if (has_param && (param <= 0.0 || param >= 2.0)) throw std::invalid_argument("SOR sweep factor must lie in (0,2)");
  } else if (name == "scaled-residual") {
    spec.kind = GeneratorKind::scaled_residual;
    if (!has_param) throw std::invalid_argument("scaled-residual needs a scale, e.g. scaled-residual:0.5");
  } else {
    throw std::invalid_argument("unknown generator: " + name);
  }
  return spec;
}

const char* kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::current_residual: return "r";
    case GeneratorKind::previous_increment: return "p";
    case GeneratorKind::jacobi: return "jacobi";
    case GeneratorKind::sor_forward: return "sor-forward";
    case GeneratorKind::sor_backward: return "sor-backward";
    default: return "scaled-residual";
  }
}

// One forward (or backward) triangular sweep of (D/w + L) y = r assuming CSR
// with ascending column indices and a full positive diagonal.
Vec sor_sweep(const SparseSpdMatrix& A, const Vec& r, double w, bool forward) {
  const Index n = A.rows();
  const auto& offsets = A.row_offsets();
  const auto& cols = A.col_indices();
  const auto& vals = A.values();
  Vec y = Vec::Zero(n);
  for (Index step = 0; step < n; ++step) {
    const Index i = forward ? step : n - 1 - step;
    double sum = r(i);
    double diag = 0.0;
    for (Index k = offsets[i]; k < offsets[i + 1]; ++k) {
      const Index j = cols[k];
      if (j == i)
        diag = vals[k];
      else if (forward ? j < i : j > i)
        sum -= vals[k] * y(j);
    }
    y(i) = sum * w / diag;
  }
  return y;
}

}  // namespace

std::vector<GeneratorSpec> parse_generator_specs(const std::string& text) {
  std::vector<GeneratorSpec> specs;
  if (!text.empty() && text.back() == ',')
    throw std::invalid_argument("generator list has a trailing comma: '" + text + "'");
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty())
      throw std::invalid_argument("generator list has an empty item: '" + text + "'");
    specs.push_back(parse_single_spec(token));
  }
  if (specs.empty()) throw std::invalid_argument("empty generator list");
  return specs;
}

std::string to_string(const std::vector<GeneratorSpec>& specs) {
  std::string out;
  for (size_t i = 0; i < specs.size(); ++i) {
    if (i) out += ',';
    out += kind_name(specs[i].kind);
    if (specs[i].kind == GeneratorKind::scaled_residual ||
        ((specs[i].kind == GeneratorKind::sor_forward || specs[i].kind == GeneratorKind::sor_backward) &&
         specs[i].param != 1.0)) {
      std::ostringstream num;
      num << specs[i].param;
      out += ':' + num.str();
    }
  }
  return out;
}

SubspaceBasis generate_subspace(const SolverState& state, const std::vector<GeneratorSpec>& specs,
                                const SparseSpdMatrix& A) {
  require_arg(!specs.empty(), "generator list must be non-empty");
  SubspaceBasis basis;
  for (const GeneratorSpec& spec : specs) {
    Vec v;
    switch (spec.kind) {
      case GeneratorKind::current_residual: v = state.r; break;
      case GeneratorKind::previous_increment: v = state.p; break;
      case GeneratorKind::jacobi: v = state.r.cwiseQuotient(A.diagonal()); break;
      case GeneratorKind::sor_forward: v = sor_sweep(A, state.r, spec.param, true); break;
      case GeneratorKind::sor_backward: v = sor_sweep(A, state.r, spec.param, false); break;
      case GeneratorKind::scaled_residual: v = spec.param * state.r; break;
    }
    if (squared_norm(v) == 0.0) continue;  // nothing to span along this direction
    basis.vectors.push_back(std::move(v));
  }
  if (basis.vectors.empty()) throw DegenerateBasisError("every generated vector was zero");
  return basis;
}

void irm_step(const SparseSpdMatrix& A, const Vec& b, SolverState& state, const std::vector<GeneratorSpec>& specs,
              const SolveConfig& config) {
  const double omega = omega_at(config, state.iter);
  state.x = state.x + omega * state.p;
  state.r = b - spmv(A, state.x);
  state.spmv_count += 1;

  SubspaceBasis basis = generate_subspace(state, specs, A);
  if (static_cast<int>(basis.vectors.size()) > config.m_max)
    basis.vectors.resize(static_cast<size_t>(config.m_max));

  std::vector<Vec> products;
  products.reserve(basis.vectors.size());
  for (const Vec& v : basis.vectors) products.push_back(spmv(A, v));
  state.spmv_count += static_cast<long long>(products.size());

  const ReducedSystem rs = assemble_from_products(basis, products, state.r);
  const ReducedSolution sol = solve_reduced(rs, config.pivot_tol);

  Vec p_next = Vec::Zero(b.size());
  Vec beta_next = Vec::Zero(b.size());
  for (size_t j = 0; j < basis.vectors.size(); ++j) {
    p_next += sol.a(static_cast<Index>(j)) * basis.vectors[j];
    beta_next += sol.a(static_cast<Index>(j)) * products[j];
  }
  state.p = p_next;
  state.beta = beta_next;  // exact A·p for a later fast/CG handoff
  state.d = state.r;       // conservative direction handoff (restart-style)
  state.rho = squared_norm(state.r);
  state.last_a = sol.a;
  state.last_basis_size = static_cast<int>(sol.kept.size());
  ++state.iter;
}

}  // namespace irm
