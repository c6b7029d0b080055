#include "snailbudget/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace snailbudget {

namespace {

constexpr double kGHz = 1e9;
// Feasibility slack in GHz units (1 Hz).
constexpr double kEps = 1e-9;

// |coeffs . x + constant| >= threshold, where the threshold is either the
// conversion separation under search or a fixed SNAIL separation.
struct Disjunction {
  std::vector<double> coeffs;
  double constant = 0.0;
  bool uses_delta2 = true;
  double fixed_threshold_ghz = 0.0;

  double threshold(double delta2_ghz) const {
    return uses_delta2 ? delta2_ghz : fixed_threshold_ghz;
  }
  double value(const std::vector<double>& x) const {
    double v = constant;
    for (size_t j = 0; j < coeffs.size(); ++j) v += coeffs[j] * x[j];
    return v;
  }
};

// Variables are x_i = (freq_i - band_lo) / 1 GHz, ascending by fiat.
struct Model {
  int n;
  double width;      // GHz
  double delta_q;    // GHz
  std::vector<LinearConstraint> base;
  std::vector<Disjunction> disjunctions;
};

LinearConstraint row(int n, std::initializer_list<std::pair<int, double>> terms,
                     Relation rel, double bound) {
  LinearConstraint c;
  c.coeffs.assign(n, 0.0);
  for (auto& [j, v] : terms) c.coeffs[j] += v;
  c.rel = rel;
  c.bound = bound;
  return c;
}

Model build_model(const AllocationProblem& p, double delta2_hz) {
  Model m;
  m.n = p.n;
  m.width = (p.band_hi_hz - p.band_lo_hz) / kGHz;
  m.delta_q = p.delta_q_hz / kGHz;
  const double d2 = delta2_hz / kGHz;
  const int n = p.n;

  m.base.push_back(row(n, {{n - 1, 1.0}}, Relation::LE, m.width));
  for (int i = 0; i + 1 < n; ++i)
    m.base.push_back(row(n, {{i + 1, 1.0}, {i, -1.0}}, Relation::GE, m.delta_q));

  // Conversion pairs sharing a lower or an upper qubit index reduce to
  // qubit-frequency differences with a known sign: every pair (a,b) other
  // than the full span (0, n-1) appears this way once n >= 3. Nested
  // conversion pairs are implied by these rows and are skipped.
  if (n >= 3 && d2 > 0) {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (a == 0 && b == n - 1) continue;
        m.base.push_back(row(n, {{b, 1.0}, {a, -1.0}}, Relation::GE, d2));
      }
  }

  // Chained pairs (i,j),(j,k) share an index in mixed roles; their
  // difference x_i - 2 x_j + x_k has no forced sign.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Disjunction d;
        d.coeffs.assign(n, 0.0);
        d.coeffs[i] = 1.0;
        d.coeffs[j] = -2.0;
        d.coeffs[k] = 1.0;
        m.disjunctions.push_back(std::move(d));
      }

  // For four indices a<b<c<d, both the sequential pair (a,b),(c,d) and the
  // crossing pair (a,c),(b,d) reduce to the same form x_a - x_b - x_c + x_d.
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          Disjunction dis;
          dis.coeffs.assign(n, 0.0);
          dis.coeffs[a] = 1.0;
          dis.coeffs[b] = -1.0;
          dis.coeffs[c] = -1.0;
          dis.coeffs[d] = 1.0;
          m.disjunctions.push_back(std::move(dis));
        }

  if (p.snail) {
    const auto& s = *p.snail;
    const double ws = (s.snail_freq_hz - p.band_lo_hz) / kGHz;  // shifted
    const double ds = s.delta_s_hz / kGHz;
    const double dsc = s.delta_s_conv_hz / kGHz;
    for (int i = 0; i < n; ++i) {
      if (s.snail_freq_hz <= p.band_lo_hz) {
        m.base.push_back(row(n, {{i, 1.0}}, Relation::GE, ws + ds));
      } else if (s.snail_freq_hz >= p.band_hi_hz) {
        m.base.push_back(row(n, {{i, 1.0}}, Relation::LE, ws - ds));
      } else {
        Disjunction d;
        d.coeffs.assign(n, 0.0);
        d.coeffs[i] = 1.0;
        d.constant = -ws;
        d.uses_delta2 = false;
        d.fixed_threshold_ghz = ds;
        m.disjunctions.push_back(std::move(d));
      }
    }
    if (dsc > 0) {
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          for (int i = 0; i < n; ++i) {
            // (x_b - x_a) - (w_s - x_i) against the SNAIL-qubit conversion.
            Disjunction d;
            d.coeffs.assign(n, 0.0);
            d.coeffs[b] += 1.0;
            d.coeffs[a] += -1.0;
            d.coeffs[i] += 1.0;
            d.constant = -ws;
            d.uses_delta2 = false;
            d.fixed_threshold_ghz = dsc;
            m.disjunctions.push_back(std::move(d));
          }
    }
  }
  return m;
}

LinearConstraint disjunction_row(const Disjunction& d, int sign,
                                 double delta2_ghz) {
  LinearConstraint c;
  c.coeffs = d.coeffs;
  double thr = d.threshold(delta2_ghz);
  if (sign > 0) {
    c.rel = Relation::GE;
    c.bound = thr - d.constant;
  } else {
    c.rel = Relation::LE;
    c.bound = -thr - d.constant;
  }
  return c;
}

struct SearchState {
  const Model* model;
  double delta2_ghz;
  SolverStats stats;
  std::vector<int> signs;  // 0 undecided, +1, -1
  std::vector<double> witness;
  bool found = false;
};

LinearProgram assemble(const SearchState& st) {
  LinearProgram lp;
  lp.num_vars = st.model->n;
  lp.constraints = st.model->base;
  for (size_t k = 0; k < st.signs.size(); ++k)
    if (st.signs[k] != 0)
      lp.constraints.push_back(disjunction_row(st.model->disjunctions[k],
                                               st.signs[k], st.delta2_ghz));
  return lp;
}

bool search(SearchState& st) {
  ++st.stats.branch_nodes;
  SimplexResult r = simplex_feasible(assemble(st));
  st.stats.lp_iterations += r.iterations;
  if (!r.feasible) return false;

  // Most violated undecided disjunction under the relaxation witness.
  int pick = -1;
  double worst = kEps;
  for (size_t k = 0; k < st.signs.size(); ++k) {
    if (st.signs[k] != 0) continue;
    const Disjunction& d = st.model->disjunctions[k];
    double gap = d.threshold(st.delta2_ghz) - std::abs(d.value(r.x));
    if (gap > worst) {
      worst = gap;
      pick = static_cast<int>(k);
    }
  }
  if (pick < 0) {
    // Witness satisfies everything; pin the remaining signs it implies so
    // canonicalization stays inside this branch.
    for (size_t k = 0; k < st.signs.size(); ++k)
      if (st.signs[k] == 0)
        st.signs[k] = st.model->disjunctions[k].value(r.x) >= 0 ? 1 : -1;
    st.witness = std::move(r.x);
    st.found = true;
    return true;
  }

  int preferred = st.model->disjunctions[pick].value(r.x) >= 0 ? 1 : -1;
  for (int sign : {preferred, -preferred}) {
    st.signs[pick] = sign;
    if (search(st)) return true;
  }
  st.signs[pick] = 0;
  return false;
}

// Lexicographically smallest point of the branch polytope the search ended
// in, for reproducible witnesses.
std::vector<double> lex_minimize_on(const SearchState& st, LinearProgram lp,
                                    bool* ok) {
  // The returned point is the final solve's vertex, not the collected
  // per-step minima: only the former satisfies every row jointly.
  std::vector<double> point = st.witness;
  *ok = false;
  for (int i = 0; i < st.model->n; ++i) {
    lp.objective = std::vector<double>(st.model->n, 0.0);
    (*lp.objective)[i] = 1.0;
    SimplexResult r = simplex_minimize(lp);
    if (!r.feasible) return point;
    point = r.x;
    lp.constraints.push_back(
        row(st.model->n, {{i, 1.0}}, Relation::LE, r.x[i] + kEps));
    lp.constraints.push_back(
        row(st.model->n, {{i, 1.0}}, Relation::GE, r.x[i] - kEps));
  }
  *ok = true;
  return point;
}

std::vector<double> lex_minimize(const SearchState& st) {
  // Preferred witness: solve with a small interior margin so every row is
  // cleared by more than the simplex feasibility tolerance (the tolerance
  // otherwise lets boundary-tight vertices sit a few Hz outside a row).
  constexpr double kMargin = 1e-7;  // GHz units: 100 Hz
  LinearProgram margined = assemble(st);
  for (auto& c : margined.constraints) {
    if (c.rel == Relation::GE)
      c.bound += kMargin;
    else if (c.rel == Relation::LE)
      c.bound -= kMargin;
  }
  bool ok = false;
  std::vector<double> point = lex_minimize_on(st, std::move(margined), &ok);
  if (ok) return point;
  // Boundary-tight branch: fall back to the exact polytope.
  point = lex_minimize_on(st, assemble(st), &ok);
  return ok ? point : st.witness;
}

std::vector<double> to_freqs(const AllocationProblem& p,
                             const std::vector<double>& x_ghz) {
  std::vector<double> f(x_ghz.size());
  for (size_t i = 0; i < x_ghz.size(); ++i)
    f[i] = p.band_lo_hz + x_ghz[i] * kGHz;
  return f;
}

void validate_problem(const AllocationProblem& p) {
  if (p.n < 2) throw std::invalid_argument("allocation: n must be >= 2");
  if (!(p.band_lo_hz < p.band_hi_hz))
    throw std::invalid_argument("allocation: band inverted");
  if (!(p.delta_q_hz > 0))
    throw std::invalid_argument("allocation: delta_Q must be > 0");
  if (p.snail && !(p.snail->snail_freq_hz > 0 && p.snail->delta_s_hz > 0))
    throw std::invalid_argument("allocation: invalid SNAIL constraints");
}

}  // namespace

std::vector<double> conversion_frequencies(
    const std::vector<double>& freqs_hz) {
  if (freqs_hz.size() < 2)
    throw std::invalid_argument("conversion_frequencies: need >= 2 freqs");
  for (size_t i = 0; i + 1 < freqs_hz.size(); ++i)
    if (!(freqs_hz[i] < freqs_hz[i + 1]))
      throw std::invalid_argument(
          "conversion_frequencies: input must be strictly increasing");
  std::vector<double> out;
  for (size_t i = 0; i < freqs_hz.size(); ++i)
    for (size_t j = i + 1; j < freqs_hz.size(); ++j)
      out.push_back(freqs_hz[j] - freqs_hz[i]);
  std::sort(out.begin(), out.end());
  return out;
}

VerifyReport verify_allocation(const std::vector<double>& freqs_hz,
                               const AllocationProblem& problem,
                               double delta2_hz, double tol_hz) {
  VerifyReport rep;
  auto fail = [&](std::string what, double margin) {
    rep.ok = false;
    rep.violations.push_back({std::move(what), margin});
  };
  std::ostringstream os;

  if (static_cast<int>(freqs_hz.size()) != problem.n)
    fail("frequency count != n", 0.0);

  for (size_t i = 0; i < freqs_hz.size(); ++i) {
    double f = freqs_hz[i];
    if (f < problem.band_lo_hz - tol_hz || f > problem.band_hi_hz + tol_hz) {
      os.str("");
      os << "qubit " << i << " outside band";
      double m = std::max(problem.band_lo_hz - f, f - problem.band_hi_hz);
      fail(os.str(), m);
    }
    if (i + 1 < freqs_hz.size()) {
      if (!(freqs_hz[i] < freqs_hz[i + 1])) {
        os.str("");
        os << "qubits " << i << "," << i + 1 << " not ascending";
        fail(os.str(), freqs_hz[i] - freqs_hz[i + 1]);
      }
      double gap = freqs_hz[i + 1] - freqs_hz[i];
      if (gap < problem.delta_q_hz - tol_hz) {
        os.str("");
        os << "qubit gap " << i << "-" << i + 1 << " below delta_Q";
        fail(os.str(), problem.delta_q_hz - gap);
      }
    }
  }

  // Pairwise conversion separations, recomputed here from first principles.
  std::vector<double> convs;
  for (size_t i = 0; i < freqs_hz.size(); ++i)
    for (size_t j = i + 1; j < freqs_hz.size(); ++j)
      convs.push_back(freqs_hz[j] - freqs_hz[i]);
  for (size_t a = 0; a < convs.size(); ++a)
    for (size_t b = a + 1; b < convs.size(); ++b) {
      double gap = std::abs(convs[a] - convs[b]);
      if (gap < delta2_hz - tol_hz) {
        os.str("");
        os << "conversion pair gap below delta2 (" << gap * 1e-6 << " MHz)";
        fail(os.str(), delta2_hz - gap);
      }
    }

  if (problem.snail) {
    const auto& s = *problem.snail;
    for (size_t i = 0; i < freqs_hz.size(); ++i) {
      double gap = std::abs(freqs_hz[i] - s.snail_freq_hz);
      if (gap < s.delta_s_hz - tol_hz) {
        os.str("");
        os << "qubit " << i << " too close to SNAIL";
        fail(os.str(), s.delta_s_hz - gap);
      }
      if (s.delta_s_conv_hz > 0) {
        double sq_conv = s.snail_freq_hz - freqs_hz[i];
        for (double c : convs) {
          double gap2 = std::abs(c - sq_conv);
          if (gap2 < s.delta_s_conv_hz - tol_hz) {
            os.str("");
            os << "conversion vs SNAIL-qubit conversion for qubit " << i;
            fail(os.str(), s.delta_s_conv_hz - gap2);
          }
        }
      }
    }
  }
  return rep;
}

std::optional<std::vector<double>> feasible_at(const AllocationProblem& problem,
                                               double delta2_hz,
                                               SolverStats* stats) {
  validate_problem(problem);
  if (delta2_hz < 0)
    throw std::invalid_argument("feasible_at: delta2 must be >= 0");
  Model m = build_model(problem, delta2_hz);
  SearchState st;
  st.model = &m;
  st.delta2_ghz = delta2_hz / kGHz;
  st.signs.assign(m.disjunctions.size(), 0);
  bool ok = search(st);
  if (stats) {
    stats->branch_nodes += st.stats.branch_nodes;
    stats->lp_iterations += st.stats.lp_iterations;
  }
  if (!ok) return std::nullopt;
  return to_freqs(problem, lex_minimize(st));
}

AllocationResult maximize_delta(const AllocationProblem& problem,
                                double resolution_hz) {
  validate_problem(problem);
  if (!(resolution_hz > 0))
    throw std::invalid_argument("maximize_delta: resolution must be > 0");

  AllocationResult res;
  const double width = problem.band_hi_hz - problem.band_lo_hz;
  if (width < (problem.n - 1) * problem.delta_q_hz) return res;  // infeasible

  auto lo_witness = feasible_at(problem, 0.0, &res.stats);
  if (!lo_witness) return res;

  if (problem.n == 2) {
    res.freqs_hz = *lo_witness;
    res.conversions_hz = conversion_frequencies(res.freqs_hz);
    res.achieved_delta_hz = kInfDelta;  // a single conversion has no gap
    res.feasible = true;
    return res;
  }

  double lo = 0.0, hi = width;
  std::vector<double> witness = *lo_witness;
  if (auto w = feasible_at(problem, hi, &res.stats)) {
    lo = hi;
    witness = *w;
  } else {
    while (hi - lo > resolution_hz) {
      double mid = 0.5 * (lo + hi);
      if (auto w = feasible_at(problem, mid, &res.stats)) {
        lo = mid;
        witness = std::move(*w);
      } else {
        hi = mid;
      }
    }
  }

  res.freqs_hz = std::move(witness);
  res.conversions_hz = conversion_frequencies(res.freqs_hz);
  double min_gap = kInfDelta;
  for (size_t i = 0; i + 1 < res.conversions_hz.size(); ++i)
    min_gap = std::min(min_gap,
                       res.conversions_hz[i + 1] - res.conversions_hz[i]);
  res.achieved_delta_hz = min_gap;
  res.feasible = true;
  return res;
}

std::string serialize_result(const AllocationResult& r) {
  nlohmann::json j;
  j["freqs_hz"] = r.freqs_hz;
  j["conversions_hz"] = r.conversions_hz;
  if (std::isinf(r.achieved_delta_hz))
    j["achieved_delta_hz"] = nullptr;
  else
    j["achieved_delta_hz"] = r.achieved_delta_hz;
  j["feasible"] = r.feasible;
  j["stats"] = {{"branch_nodes", r.stats.branch_nodes},
                {"lp_iterations", r.stats.lp_iterations}};
  return j.dump(2) + "\n";
}

AllocationResult parse_result(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  AllocationResult r;
  r.freqs_hz = j.at("freqs_hz").get<std::vector<double>>();
  r.conversions_hz = j.at("conversions_hz").get<std::vector<double>>();
  r.achieved_delta_hz = j.at("achieved_delta_hz").is_null()
                            ? kInfDelta
                            : j.at("achieved_delta_hz").get<double>();
  r.feasible = j.at("feasible").get<bool>();
  if (j.contains("stats")) {
    r.stats.branch_nodes = j["stats"].value("branch_nodes", 0L);
    r.stats.lp_iterations = j["stats"].value("lp_iterations", 0L);
  }
  return r;
}

}  // namespace snailbudget
