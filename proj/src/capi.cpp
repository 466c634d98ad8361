#include "tracelab/tracelab.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "tracelab/falsifier.hpp"
#include "tracelab/harness.hpp"
#include "tracelab/majorization.hpp"
#include "tracelab/matrix_gen.hpp"
#include "tracelab/trace_inequalities.hpp"

struct tl_matrix {
  tracelab::MatrixKind kind;
  tracelab::HermitianMatrix hermitian;
  std::optional<tracelab::PsdMatrix> psd;
};

namespace {

using namespace tracelab;

thread_local std::string g_last_error;

struct NullArgument {};
struct BufferTooSmall {};

tl_status fail(tl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
tl_status guarded(F&& body) {
  try {
    body();
    return TL_OK;
  } catch (const Error& e) {
    return fail(static_cast<tl_status>(static_cast<int>(e.code())), e.what());
  } catch (const NullArgument&) {
    return fail(TL_ERR_NULL_ARGUMENT, "required pointer argument is null");
  } catch (const BufferTooSmall&) {
    return fail(TL_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  } catch (const std::bad_alloc&) {
    return fail(TL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TL_ERR_INTERNAL, e.what());
  }
}

template <typename... P>
void require(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument{};
}

const PsdMatrix& as_psd(const tl_matrix* m) {
  require(m);
  if (!m->psd) throw Error(ErrorCode::NotPsd, "operand handle is Hermitian, a PSD matrix is required");
  return *m->psd;
}

tl_matrix* wrap_psd(PsdMatrix p) {
  return new tl_matrix{MatrixKind::Psd, p.hermitian(), std::move(p)};
}

tl_matrix* wrap_hermitian(HermitianMatrix h) {
  return new tl_matrix{MatrixKind::Hermitian, std::move(h), std::nullopt};
}

tl_side_pair to_c(const SidePair& s) {
  tl_side_pair o{};
  o.lhs = s.lhs;
  o.rhs = s.rhs;
  o.slack = s.slack;
  o.p_or_nu = s.p_or_nu;
  o.tol_used = s.tol_used;
  o.direction = s.expected_direction == Direction::LhsLeqRhs   ? TL_LHS_LEQ_RHS
                : s.expected_direction == Direction::LhsGeqRhs ? TL_LHS_GEQ_RHS
                                                                : TL_EQUAL;
  o.holds = s.holds;
  return o;
}

tl_chain to_c(const ChainReport& c) {
  if (c.terms.size() > TL_MAX_CHAIN_TERMS) throw BufferTooSmall{};
  tl_chain o{};
  o.count = c.terms.size();
  std::copy(c.terms.begin(), c.terms.end(), o.terms);
  std::copy(c.adjacent_slacks.begin(), c.adjacent_slacks.end(), o.adjacent_slacks);
  o.tol_used = c.tol_used;
  o.holds = c.holds;
  return o;
}

void copy_out(const std::vector<double>& src, double* dst) {
  if (dst != nullptr) std::copy(src.begin(), src.end(), dst);
}

}  // namespace

extern "C" {

TL_API const char* tl_version(void) { return "1.0.0"; }

TL_API const char* tl_last_error(void) { return g_last_error.c_str(); }

TL_API const char* tl_status_name(tl_status status) {
  switch (status) {
    case TL_OK: return "OK";
    case TL_ERR_NULL_ARGUMENT: return "NullArgument";
    case TL_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case TL_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= static_cast<int>(ErrorCode::IoError)) {
    return error_code_name(static_cast<ErrorCode>(code));
  }
  return "Unknown";
}

TL_API tl_status tl_matrix_create(size_t n, const double* entries, tl_matrix_kind kind,
                                  tl_matrix** out) {
  return guarded([&] {
    require(entries, out);
    if (n < 1 || n > kMaxDimension) throw Error(ErrorCode::InvalidArgument, "n must lie in [1, 64]");
    std::vector<Complex> values(n * n);
    for (std::size_t k = 0; k < n * n; ++k) values[k] = Complex(entries[2 * k], entries[2 * k + 1]);
    HermitianMatrix h(DenseMatrix(n, std::move(values)));
    *out = kind == TL_KIND_PSD ? wrap_psd(PsdMatrix(h)) : wrap_hermitian(std::move(h));
  });
}

TL_API tl_status tl_matrix_load(const char* path, tl_matrix** out) {
  return guarded([&] {
    require(path, out);
    LoadedMatrix m = parse_matrix_file(path);
    *out = new tl_matrix{m.kind, std::move(m.hermitian), std::move(m.psd)};
  });
}

TL_API tl_status tl_matrix_save(const tl_matrix* m, const char* path) {
  return guarded([&] {
    require(m, path);
    write_matrix_file(path, m->hermitian.dense(), m->kind);
  });
}

TL_API tl_status tl_matrix_generate(const char* kind, size_t n, size_t rank, double scale,
                                    uint64_t seed, tl_matrix** out) {
  return guarded([&] {
    require(kind, out);
    GeneratorSpec spec{parse_generator_kind(kind), n, rank, scale, seed};
    if (spec.kind == GeneratorKind::HermitianGue) {
      *out = wrap_hermitian(random_hermitian(spec));
    } else {
      *out = wrap_psd(random_psd(spec));
    }
  });
}

TL_API tl_status tl_generate_pair(const char* kind, size_t n, uint64_t seed, tl_matrix** a,
                                  tl_matrix** b) {
  return guarded([&] {
    require(kind, a, b);
    GeneratorSpec tmpl;
    tmpl.kind = parse_generator_kind(kind);
    auto [first, second] = generate_pair(tmpl, n, seed);
    if (tmpl.kind == GeneratorKind::HermitianGue) {
      *a = wrap_hermitian(std::move(first));
      *b = wrap_hermitian(std::move(second));
    } else {
      *a = wrap_psd(PsdMatrix(first));
      *b = wrap_psd(PsdMatrix(second));
    }
  });
}

TL_API void tl_matrix_free(tl_matrix* m) { delete m; }

TL_API size_t tl_matrix_dim(const tl_matrix* m) { return m == nullptr ? 0 : m->hermitian.n(); }

TL_API tl_matrix_kind tl_matrix_get_kind(const tl_matrix* m) {
  return m != nullptr && m->kind == MatrixKind::Psd ? TL_KIND_PSD : TL_KIND_HERMITIAN;
}

TL_API tl_status tl_matrix_entries(const tl_matrix* m, double* out, size_t len) {
  return guarded([&] {
    require(m, out);
    const auto entries = m->hermitian.dense().entries();
    if (len < 2 * entries.size()) throw BufferTooSmall{};
    for (std::size_t k = 0; k < entries.size(); ++k) {
      out[2 * k] = entries[k].real();
      out[2 * k + 1] = entries[k].imag();
    }
  });
}

TL_API tl_status tl_matrix_spectrum(const tl_matrix* m, double* out, size_t len) {
  return guarded([&] {
    require(m, out);
    const Spectrum s = m->psd ? m->psd->spectrum() : hermitian_eigen(m->hermitian).spectrum;
    if (len < s.size()) throw BufferTooSmall{};
    std::copy(s.values().begin(), s.values().end(), out);
  });
}

TL_API tl_status tl_problem2_sides(const tl_matrix* t, const tl_matrix* s, double p, double tol,
                                   tl_side_pair* out) {
  return guarded([&] {
    require(out);
    *out = to_c(problem2_sides(as_psd(t), as_psd(s), p, tol));
  });
}

TL_API tl_status tl_conjecture1_sides(const tl_matrix* x, const tl_matrix* y, double p, double tol,
                                      tl_conjecture1_report* out) {
  return guarded([&] {
    require(out);
    const Conjecture1Report r = conjecture1_sides(as_psd(x), as_psd(y), p, tol);
    *out = tl_conjecture1_report{to_c(r.sides), r.reformulated_lhs, r.reformulated_rhs,
                                 r.reformulation_residual, r.holds};
  });
}

TL_API tl_status tl_theorem1_majorization(const tl_matrix* t, const tl_matrix* s, double tol,
                                          tl_majorization_summary* out, double* lhs_sums,
                                          double* rhs_sums) {
  return guarded([&] {
    require(out);
    const MajorizationVerdict v = theorem1_majorization(as_psd(t), as_psd(s), tol);
    *out = tl_majorization_summary{v.k_sums_lhs.size(), v.min_slack(), v.total_residual,
                                   v.tol_used, v.holds};
    copy_out(v.k_sums_lhs, lhs_sums);
    copy_out(v.k_sums_rhs, rhs_sums);
  });
}

TL_API tl_status tl_proof_chain(const tl_matrix* t, const tl_matrix* s, size_t k, double tol,
                                tl_proof_chain_report* out) {
  return guarded([&] {
    require(out);
    const ProofChainReport r = proof_chain_spectra(as_psd(t), as_psd(s), k, tol);
    tl_proof_chain_report o{};
    o.chain = to_c(r.chain);
    o.factor_sums[0] = r.factor_sums[0];
    o.factor_sums[1] = r.factor_sums[1];
    o.factor_residual = r.factor_residual;
    o.similarity_residual = r.similarity_residual;
    o.similarity_scale = r.similarity_scale;
    o.expansion_residual = r.expansion_residual;
    o.final_slack = r.final_slack;
    o.holds = r.holds;
    *out = o;
  });
}

TL_API tl_status tl_p2_elementary(const tl_matrix* t, const tl_matrix* s, double tol,
                                  tl_p2_report* out) {
  return guarded([&] {
    require(out);
    const P2ElementaryReport r = p2_elementary_check(as_psd(t), as_psd(s), tol);
    *out = tl_p2_report{to_c(r.product_route), r.spectral_lhs, r.spectral_rhs, r.route_residual,
                        r.holds};
  });
}

TL_API tl_status tl_exp_nu(const tl_matrix* x, double nu, tl_matrix** out) {
  return guarded([&] {
    require(out);
    *out = wrap_psd(exp_nu(as_psd(x), nu));
  });
}

TL_API tl_status tl_gt_chain(const tl_matrix* x, const tl_matrix* y, double nu, double tol,
                             tl_gt_chain_report* out) {
  return guarded([&] {
    require(out);
    const GtChainReport r = gt_chain(as_psd(x), as_psd(y), nu, tol);
    *out = tl_gt_chain_report{to_c(r.chain), r.nu, r.end_to_end_slack, r.holds};
  });
}

TL_API tl_status tl_ky_fan_check(const tl_matrix* a, const tl_matrix* b, double tol,
                                 tl_ky_fan_summary* out) {
  return guarded([&] {
    require(a, b, out);
    const KyFanReport r = ky_fan_check(a->hermitian, b->hermitian, tol);
    *out = tl_ky_fan_summary{r.min_slack(), r.tol_used, r.holds};
  });
}

TL_API tl_status tl_symmetric_ky_fan_check(const tl_matrix* x, const tl_matrix* y, double tol,
                                           tl_ky_fan_summary* out) {
  return guarded([&] {
    require(x, y, out);
    const KyFanReport r = symmetric_ky_fan_check(x->hermitian, y->hermitian, tol);
    *out = tl_ky_fan_summary{r.min_slack(), r.tol_used, r.holds};
  });
}

TL_API tl_status tl_gt_limit_probe(const tl_matrix* x, const tl_matrix* y, const double* nu_grid,
                                   size_t nu_count, double tol, tl_limit_summary* out,
                                   double* deviations, double* gt_slacks) {
  return guarded([&] {
    require(nu_grid, out);
    const LimitProbeReport r =
        classical_gt_limit_probe(as_psd(x), as_psd(y), std::span(nu_grid, nu_count), tol);
    *out = tl_limit_summary{r.trace_exp_x, r.classical_gt_slack, r.tol_used,
                            r.monotone,    r.strictly_decreasing, r.holds};
    copy_out(r.deviations, deviations);
    copy_out(r.gt_end_to_end_slacks, gt_slacks);
  });
}

TL_API tl_status tl_run_check(const char* check, const tl_matrix* a, const tl_matrix* b,
                              double param, const double* nu_grid, size_t nu_count, double tol,
                              tl_check_result* out, double* lhs, size_t lhs_cap, double* rhs,
                              size_t rhs_cap) {
  return guarded([&] {
    require(check, a, b, out);
    const std::span<const double> grid =
        nu_grid == nullptr ? std::span<const double>() : std::span(nu_grid, nu_count);
    const CheckOutcome o = run_check(parse_check_kind(check), a->hermitian, b->hermitian, param, grid, tol);
    *out = tl_check_result{o.min_slack, o.holds, o.lhs.size(), o.rhs.size()};
    if (lhs != nullptr) {
      if (lhs_cap < o.lhs.size()) throw BufferTooSmall{};
      copy_out(o.lhs, lhs);
    }
    if (rhs != nullptr) {
      if (rhs_cap < o.rhs.size()) throw BufferTooSmall{};
      copy_out(o.rhs, rhs);
    }
  });
}

TL_API tl_status tl_sweep_run(const char* config_json, const char* output_path,
                              tl_sweep_summary* out) {
  return guarded([&] {
    require(config_json, output_path, out);
    const SweepSummary s = run_sweep(sweep_config_from_json(config_json), output_path);
    *out = tl_sweep_summary{s.total, s.held, s.failed, s.min_slack};
  });
}

TL_API void tl_search_config_default(tl_search_config* config) {
  if (config == nullptr) return;
  const SearchConfig d;
  *config = tl_search_config{target_kind_name(d.target.kind),
                             d.target.param,
                             d.target.step,
                             d.n,
                             d.restarts,
                             d.max_evals_per_restart,
                             d.simplex_init_radius,
                             d.seed,
                             d.convergence_eps,
                             d.threads};
}

TL_API tl_status tl_search_run(const tl_search_config* config, tl_search_result* out,
                               double* per_restart_bests, tl_matrix** witness_t,
                               tl_matrix** witness_s) {
  return guarded([&] {
    require(config, out);
    require(config->target);
    SearchConfig c;
    c.target.kind = parse_target_kind(config->target);
    c.target.param = config->param;
    c.target.step = config->step;
    c.n = config->n;
    c.restarts = config->restarts;
    c.max_evals_per_restart = config->max_evals_per_restart;
    c.simplex_init_radius = config->simplex_init_radius;
    c.seed = config->seed;
    c.convergence_eps = config->convergence_eps;
    c.threads = config->threads;
    const SearchResult r = search_min_slack(c);
    *out = tl_search_result{r.best_slack, r.eval_count, r.per_restart_bests.size(), r.violated};
    copy_out(r.per_restart_bests, per_restart_bests);
    if (witness_t != nullptr) *witness_t = wrap_psd(r.witness_t);
    if (witness_s != nullptr) *witness_s = wrap_psd(r.witness_s);
  });
}

}  // extern "C"
