#include "icrys/projective.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "icrys/itensor.hpp"
#include "json.hpp"

namespace icrys {

namespace {

using ordered_json = nlohmann::ordered_json;

void require_dominant(const Weight& w, const char* what) {
  if (!weight_dominant(w))
    throw std::invalid_argument(std::string(what) + " must be dominant, got " +
                                weight_str(w));
}

std::string word_str(const BWord& w) {
  if (w.empty()) return "(empty word)";
  std::string out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (!out.empty()) out += " ";
    out += "f" + std::to_string(*it + 1);
  }
  return out;
}

ICrystalGraph b_lambda_sigma_from(const BLambda& realization, long long cap) {
  return tensor_icrystal_crystal(b_zero_sigma(realization.datum()),
                                 realization.graph(cap));
}

// For each source element: the common value (graph index in dst, or -1) of
// all of its covering words evaluated in dst; throws on any disagreement.
std::vector<int> project_by_words(const BLambda& src, const BLambda& dst,
                                  long long cap, const char* what) {
  const CrystalGraph& sg = src.graph(cap);
  const auto covers = all_covering_words(src, cap);
  std::vector<int> out(static_cast<size_t>(sg.size()), -1);
  for (int x = 0; x < sg.size(); ++x) {
    const auto& words = covers[static_cast<size_t>(x)];
    int got = -1;
    const BWord* first = nullptr;
    for (const BWord& w : words) {
      const auto st = dst.eval_word(w);
      const int y = st ? dst.index_of(*st) : -1;
      if (first == nullptr) {
        got = y;
        first = &w;
        continue;
      }
      if (y != got)
        throw std::runtime_error(
            std::string(what) + ": element \"" + sg.names[static_cast<size_t>(x)] +
            "\" is not mapped consistently: word [" + word_str(*first) +
            "] lands at " + (got < 0 ? std::string("0") : dst.graph(cap).names[static_cast<size_t>(got)]) +
            " but word [" + word_str(w) + "] lands at " +
            (y < 0 ? std::string("0") : dst.graph(cap).names[static_cast<size_t>(y)]));
    }
    out[static_cast<size_t>(x)] = got;
  }
  return out;
}

std::vector<std::vector<Sqrt2Scalar>> unit_cols(const std::vector<int>& proj,
                                                int target_size) {
  std::vector<std::vector<Sqrt2Scalar>> cols(
      proj.size(), std::vector<Sqrt2Scalar>(static_cast<size_t>(target_size)));
  for (size_t x = 0; x < proj.size(); ++x)
    if (proj[x] >= 0) cols[x][static_cast<size_t>(proj[x])] = Sqrt2Scalar::one();
  return cols;
}

ordered_json iext_to_json(const IExtInt& v) {
  if (v.finite()) return ordered_json(v.get());
  return ordered_json(v.str());
}

ordered_json amp_to_json(const Sqrt2Scalar& z) {
  return ordered_json{{"a", z.a}, {"b", z.b}, {"k", z.k}, {"str", z.str()}};
}

ordered_json word_to_json(const BWord& w) {
  ordered_json arr = ordered_json::array();
  for (int i : w) arr.push_back(i + 1);
  return arr;
}

ordered_json terms_to_json(const std::vector<LimitTerm>& terms) {
  ordered_json arr = ordered_json::array();
  for (const auto& t : terms)
    arr.push_back(ordered_json{{"amp", amp_to_json(t.amp)}, {"word", word_to_json(t.b)}});
  return arr;
}

}  // namespace

SigmaWeight compute_sigma(const CartanSatakeDatum& datum) {
  Weight sigma = weight_zero(datum);
  for (int i = 0; i < datum.rank; ++i) {
    const int a = datum.a_itau(i);
    if (a == 2) {
      sigma[static_cast<size_t>(i)] = std::llabs(datum.s[static_cast<size_t>(i)]);
    } else if (a == 0) {
      sigma[static_cast<size_t>(i)] = 0;
    } else {
      sigma[static_cast<size_t>(i)] =
          datum.is_rep(i)
              ? std::max<long long>(datum.s[static_cast<size_t>(i)], 0)
              : std::max<long long>(-datum.s[static_cast<size_t>(datum.tau[static_cast<size_t>(i)])], 0);
    }
  }
  return SigmaWeight{sigma};
}

ICrystalGraph b_zero_sigma(const CartanSatakeDatum& datum) {
  const Weight sigma = compute_sigma(datum).sigma;
  ICrystalGraph g;
  g.datum = datum;
  g.names = {"b0^s"};
  g.wti = {project_weight(sigma, datum)};
  g.beta = {std::vector<IExtInt>(static_cast<size_t>(datum.rank), IExtInt(0))};
  g.btil.assign(static_cast<size_t>(datum.rank),
                std::vector<std::vector<std::pair<int, Sqrt2Scalar>>>(1));
  return g;
}

ICrystalGraph t_zeta_graph(const CartanSatakeDatum& datum, const IWeight& zeta) {
  if (static_cast<int>(zeta.val.size()) != datum.num_orbits())
    throw std::invalid_argument("t_zeta_graph: expected one value per tau-orbit");
  std::map<std::string, long long> params;
  for (int o = 0; o < datum.num_orbits(); ++o)
    params["zeta_" + std::to_string(o + 1)] = zeta.val[static_cast<size_t>(o)];
  return make_builtin_icrystal(datum, "t_zeta", params);
}

ICrystalGraph b_lambda_sigma(const CartanSatakeDatum& datum, const Weight& lambda,
                             long long cap) {
  require_dominant(lambda, "b_lambda_sigma: lambda");
  BLambda realization(datum, lambda);
  return b_lambda_sigma_from(realization, cap);
}

ICrystalMorphism b_lambda_sigma_vs_t_tensor(const CartanSatakeDatum& datum,
                                            const Weight& lambda, long long cap) {
  require_dominant(lambda, "b_lambda_sigma_vs_t_tensor: lambda");
  BLambda realization(datum, lambda);
  const IWeight sigma_bar = project_weight(compute_sigma(datum).sigma, datum);
  ICrystalMorphism m;
  m.source = b_lambda_sigma_from(realization, cap);
  m.target = tensor_icrystal_crystal(t_zeta_graph(datum, sigma_bar),
                                     realization.graph(cap));
  std::vector<int> identity(static_cast<size_t>(m.source.size()));
  for (size_t x = 0; x < identity.size(); ++x) identity[x] = static_cast<int>(x);
  m.cols = unit_cols(identity, m.target.size());
  return m;
}

std::vector<std::vector<BWord>> all_covering_words(const BLambda& realization,
                                                   long long cap) {
  const CrystalGraph& g = realization.graph(cap);
  const std::vector<BWord> primary = covering_words(realization);
  std::vector<std::set<BWord>> acc(static_cast<size_t>(g.size()));
  for (int x = 0; x < g.size(); ++x) acc[static_cast<size_t>(x)].insert(primary[static_cast<size_t>(x)]);
  for (int x = 0; x < g.size(); ++x)
    for (int i = 0; i < g.datum.rank; ++i) {
      const int y = g.f[static_cast<size_t>(x)][static_cast<size_t>(i)];
      if (y < 0) continue;
      BWord w = primary[static_cast<size_t>(x)];
      w.push_back(i);
      acc[static_cast<size_t>(y)].insert(std::move(w));
    }
  std::vector<std::vector<BWord>> out(static_cast<size_t>(g.size()));
  for (int x = 0; x < g.size(); ++x)
    out[static_cast<size_t>(x)].assign(acc[static_cast<size_t>(x)].begin(),
                                       acc[static_cast<size_t>(x)].end());
  return out;
}

ICrystalMorphism gamma_nu(const CartanSatakeDatum& datum, const Weight& nu,
                          long long cap) {
  require_dominant(nu, "gamma_nu: nu");
  const Weight ambient = weight_add(compute_sigma(datum).sigma,
                                    weight_add(nu, tau_weight(datum, nu)));
  BLambda realization(datum, ambient);
  ICrystalMorphism m;
  m.source = induce_icrystal(realization.graph(cap), "general");
  m.target = b_zero_sigma(datum);
  std::vector<int> proj(static_cast<size_t>(m.source.size()), -1);
  proj[static_cast<size_t>(realization.index_of(realization.highest()))] = 0;
  m.cols = unit_cols(proj, 1);
  return m;
}

ICrystalMorphism rho_lambda(const CartanSatakeDatum& datum, const Weight& lambda,
                            long long cap) {
  require_dominant(lambda, "rho_lambda: lambda");
  const Weight ambient = weight_add(compute_sigma(datum).sigma, lambda);
  BLambda src(datum, ambient);
  BLambda dst(datum, lambda);
  ICrystalMorphism m;
  m.source = induce_icrystal(src.graph(cap), "general");
  m.target = b_lambda_sigma_from(dst, cap);
  m.cols = unit_cols(project_by_words(src, dst, cap, "rho_lambda"), m.target.size());
  return m;
}

ICrystalMorphism rho_lambda_injection(const CartanSatakeDatum& datum,
                                      const Weight& lambda, long long cap) {
  require_dominant(lambda, "rho_lambda_injection: lambda");
  const Weight ambient = weight_add(compute_sigma(datum).sigma, lambda);
  BLambda src(datum, lambda);
  BLambda dst(datum, ambient);
  ICrystalMorphism m;
  m.source = b_lambda_sigma_from(src, cap);
  m.target = induce_icrystal(dst.graph(cap), "general");
  m.cols = unit_cols(project_by_words(src, dst, cap, "rho_lambda_injection"),
                     m.target.size());
  return m;
}

ICrystalMorphism pi_i_lambda_nu(const CartanSatakeDatum& datum, const Weight& lambda,
                                const Weight& nu, long long cap) {
  require_dominant(lambda, "pi_i_lambda_nu: lambda");
  require_dominant(nu, "pi_i_lambda_nu: nu");
  const Weight big = weight_add(lambda, weight_add(nu, tau_weight(datum, nu)));
  BLambda src(datum, big);
  BLambda dst(datum, lambda);
  ICrystalMorphism m;
  m.source = b_lambda_sigma_from(src, cap);
  m.target = b_lambda_sigma_from(dst, cap);
  m.cols = unit_cols(project_by_words(src, dst, cap, "pi_i_lambda_nu"), m.target.size());
  return m;
}

ICrystalMorphism compose_icrystal_morphisms(const ICrystalMorphism& second,
                                            const ICrystalMorphism& first) {
  if (first.target.size() != second.source.size())
    throw std::invalid_argument(
        "compose_icrystal_morphisms: inner element counts differ (" +
        std::to_string(first.target.size()) + " vs " +
        std::to_string(second.source.size()) + ")");
  ICrystalMorphism m;
  m.source = first.source;
  m.target = second.target;
  m.cols.assign(static_cast<size_t>(m.source.size()),
                std::vector<Sqrt2Scalar>(static_cast<size_t>(m.target.size())));
  for (int x = 0; x < m.source.size(); ++x)
    for (int y = 0; y < first.target.size(); ++y) {
      const Sqrt2Scalar& a = first.cols[static_cast<size_t>(x)][static_cast<size_t>(y)];
      if (a.is_zero()) continue;
      for (int z = 0; z < m.target.size(); ++z) {
        const Sqrt2Scalar& b = second.cols[static_cast<size_t>(y)][static_cast<size_t>(z)];
        if (b.is_zero()) continue;
        m.cols[static_cast<size_t>(x)][static_cast<size_t>(z)] =
            m.cols[static_cast<size_t>(x)][static_cast<size_t>(z)] + a * b;
      }
    }
  return m;
}

std::string LimitDepthSample::str() const {
  std::string out = "lambda=" + weight_str(lambda);
  if (!in_range) return out + ", out of range";
  out += ", beta=" + beta.str() + ", image=";
  if (terms.empty()) return out + "0";
  bool first = true;
  for (const auto& t : terms) {
    if (!first) out += " + ";
    first = false;
    out += "(" + t.amp.str() + ")*[" + word_str(t.b) + "]";
  }
  return out;
}

Weight limit_lambda_representative(const CartanSatakeDatum& datum, const IWeight& zeta) {
  if (static_cast<int>(zeta.val.size()) != datum.num_orbits())
    throw std::invalid_argument(
        "limit_lambda_representative: expected one value per tau-orbit");
  const IWeight z = iweight_add(zeta, iweight_zero(datum), datum);
  const Weight sigma = compute_sigma(datum).sigma;
  Weight lambda = weight_zero(datum);
  for (int o = 0; o < datum.num_orbits(); ++o) {
    const int i = datum.i_tau[static_cast<size_t>(o)];
    if (datum.fixed(i)) {
      lambda[static_cast<size_t>(i)] =
          (((z.val[static_cast<size_t>(o)] - sigma[static_cast<size_t>(i)]) % 2) + 2) % 2;
    } else {
      const int j = datum.tau[static_cast<size_t>(i)];
      const long long need = z.val[static_cast<size_t>(o)] -
                             (sigma[static_cast<size_t>(i)] - sigma[static_cast<size_t>(j)]);
      lambda[static_cast<size_t>(i)] = std::max<long long>(need, 0);
      lambda[static_cast<size_t>(j)] = std::max<long long>(-need, 0);
    }
  }
  return lambda;
}

LimitDepthSample limit_sample(const CartanSatakeDatum& datum, const BWord& b, int node,
                              const Weight& lambda, long long cap) {
  if (node < 0 || node >= datum.rank)
    throw std::invalid_argument("limit_sample: node out of range");
  LimitDepthSample sample;
  sample.lambda = lambda;
  BLambda realization(datum, lambda);
  const auto state = realization.eval_word(b);
  if (!state) return sample;
  sample.in_range = true;
  const ICrystalGraph graph = b_lambda_sigma_from(realization, cap);
  const int x = realization.index_of(*state);
  sample.beta = graph.beta[static_cast<size_t>(x)][static_cast<size_t>(node)];
  const std::vector<BWord> primary = covering_words(realization);
  for (const auto& [y, z] : graph.btil[static_cast<size_t>(node)][static_cast<size_t>(x)])
    sample.terms.push_back(LimitTerm{z, primary[static_cast<size_t>(y)]});
  return sample;
}

bool limit_samples_agree(const CartanSatakeDatum& datum, const LimitDepthSample& x,
                         const LimitDepthSample& y) {
  if (!x.in_range || !y.in_range) return false;
  if (!(x.beta == y.beta)) return false;
  if (x.terms.size() != y.terms.size()) return false;
  std::vector<bool> used(y.terms.size(), false);
  for (const auto& t : x.terms) {
    bool matched = false;
    for (size_t j = 0; j < y.terms.size(); ++j) {
      if (used[j] || !(y.terms[j].amp == t.amp)) continue;
      if (!binfty_equal(datum, t.b, y.terms[j].b)) continue;
      used[j] = true;
      matched = true;
      break;
    }
    if (!matched) return false;
  }
  return true;
}

LimitResult limit_action(const CartanSatakeDatum& datum, const IWeight& zeta,
                         const BWord& b, int node, int max_depth, long long cap) {
  if (max_depth < 1)
    throw std::invalid_argument("limit_action: max_depth must be at least 1");
  const Weight lambda0 = limit_lambda_representative(datum, zeta);
  const Weight step(static_cast<size_t>(datum.rank), 2);  // rho + tau(rho)

  LimitResult result;
  result.zeta = iweight_add(zeta, iweight_zero(datum), datum);
  result.b = b;
  result.node = node;

  Weight lambda = lambda0;
  for (int depth = 0; depth <= max_depth; ++depth) {
    result.trace.push_back(limit_sample(datum, b, node, lambda, cap));
    const size_t n = result.trace.size();
    if (n >= 2 && limit_samples_agree(datum, result.trace[n - 2], result.trace[n - 1])) {
      result.beta = result.trace[n - 1].beta;
      result.terms = result.trace[n - 1].terms;
      result.depth_stabilized = depth - 1;
      return result;
    }
    lambda = weight_add(lambda, step);
  }
  const size_t n = result.trace.size();
  throw std::runtime_error(
      "limit_action: no stabilization within " + std::to_string(max_depth) +
      " chain steps; last two samples: {" + result.trace[n - 2].str() + "} vs {" +
      result.trace[n - 1].str() + "}");
}

IExtInt limit_beta(const CartanSatakeDatum& datum, const IWeight& zeta, const BWord& b,
                   int node, int max_depth, long long cap) {
  return limit_action(datum, zeta, b, node, max_depth, cap).beta;
}

std::vector<int> beta_btil_annihilated(const ICrystalGraph& g) {
  std::vector<int> out;
  for (int x = 0; x < g.size(); ++x) {
    bool all = true;
    for (int i = 0; i < g.datum.rank && all; ++i) {
      if (!(g.beta[static_cast<size_t>(x)][static_cast<size_t>(i)] == IExtInt(0)) ||
          !g.btil[static_cast<size_t>(i)][static_cast<size_t>(x)].empty())
        all = false;
    }
    if (all) out.push_back(x);
  }
  return out;
}

std::string HighestWeightCharacterizationReport::str() const {
  std::string out = "ambient " + weight_str(ambient) + ", " + std::to_string(size) +
                    " elements, annihilated = {";
  for (size_t k = 0; k < annihilated.size(); ++k) {
    if (k) out += ", ";
    out += std::to_string(annihilated[k]);
  }
  out += "}, highest = " + std::to_string(highest_index);
  out += pass ? " [pass]" : " [FAIL]";
  return out;
}

HighestWeightCharacterizationReport check_highest_weight_characterization(
    const CartanSatakeDatum& datum, const Weight& nu, long long cap) {
  require_dominant(nu, "check_highest_weight_characterization: nu");
  const Weight ambient = weight_add(compute_sigma(datum).sigma,
                                    weight_add(nu, tau_weight(datum, nu)));
  BLambda realization(datum, ambient);
  const ICrystalGraph graph = induce_icrystal(realization.graph(cap), "general");
  HighestWeightCharacterizationReport report;
  report.ambient = ambient;
  report.size = graph.size();
  report.highest_index = realization.index_of(realization.highest());
  report.annihilated = beta_btil_annihilated(graph);
  report.pass = report.annihilated.size() == 1 &&
                report.annihilated[0] == report.highest_index;
  return report;
}

std::string imorphism_to_json_text(const ICrystalMorphism& m) {
  ordered_json j;
  j["schema"] = 1;
  j["kind"] = "icrystal_morphism";
  j["class"] = imorphism_class_str(check_icrystal_morphism(m).cls);
  j["source_size"] = m.source.size();
  j["target_size"] = m.target.size();
  j["source_elements"] = m.source.names;
  j["target_elements"] = m.target.names;
  ordered_json entries = ordered_json::array();
  for (int x = 0; x < m.source.size(); ++x)
    for (int y = 0; y < m.target.size(); ++y) {
      const Sqrt2Scalar& z = m.cols[static_cast<size_t>(x)][static_cast<size_t>(y)];
      if (z.is_zero()) continue;
      entries.push_back(ordered_json{{"src", x}, {"dst", y}, {"amp", amp_to_json(z)}});
    }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

std::string limit_result_to_json_text(const LimitResult& r) {
  ordered_json j;
  j["schema"] = 1;
  j["kind"] = "limit_evaluation";
  j["zeta"] = r.zeta.val;
  j["word"] = word_to_json(r.b);
  j["node"] = r.node + 1;
  j["beta"] = iext_to_json(r.beta);
  j["terms"] = terms_to_json(r.terms);
  j["depth_stabilized"] = r.depth_stabilized;
  ordered_json trace = ordered_json::array();
  for (const auto& s : r.trace) {
    ordered_json e;
    e["lambda"] = s.lambda;
    e["in_range"] = s.in_range;
    if (s.in_range) {
      e["beta"] = iext_to_json(s.beta);
      e["terms"] = terms_to_json(s.terms);
    }
    trace.push_back(e);
  }
  j["trace"] = trace;
  return j.dump(2) + "\n";
}

}  // namespace icrys
