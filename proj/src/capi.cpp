#include "sigmaevo/sigmaevo.h"

#include <exception>
#include <string>

#include "sigmaevo/errors.hpp"
#include "sigmaevo/experiment_runner.hpp"
#include "sigmaevo/exponent_oracle.hpp"
#include "sigmaevo/linear_propagator.hpp"
#include "sigmaevo/spectral_symbol.hpp"

struct sevo_model {
  sigmaevo::ModelParams params;
};

struct sevo_result {
  sigmaevo::RunOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

sevo_status fail(sevo_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class F>
sevo_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const sigmaevo::Error& e) {
    switch (e.kind()) {
      case sigmaevo::ErrorKind::invalid_argument: return fail(SEVO_INVALID_ARGUMENT, e.what());
      case sigmaevo::ErrorKind::config: return fail(SEVO_CONFIG, e.what());
      case sigmaevo::ErrorKind::numeric: return fail(SEVO_NUMERIC, e.what());
      case sigmaevo::ErrorKind::internal: break;
    }
    return fail(SEVO_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(SEVO_INTERNAL, e.what());
  } catch (...) {
    return fail(SEVO_INTERNAL, "unknown exception");
  }
}

sigmaevo::ModelParams to_params(const sevo_params& p) {
  sigmaevo::ModelParams out;
  out.sigma = p.sigma;
  out.n = p.n;
  out.m = p.m;
  out.p = p.p;
  out.eps_zone = p.eps_zone;
  out.n_zone = p.n_zone;
  return out;
}

}  // namespace

extern "C" {

sevo_params sevo_default_params(void) {
  const sigmaevo::ModelParams d;
  return {d.sigma, d.n, d.m, d.p, d.eps_zone, d.n_zone};
}

sevo_status sevo_model_create(const sevo_params* params, sevo_model** out) {
  if (!params || !out) return fail(SEVO_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto p = to_params(*params);
    p.validate();
    *out = new sevo_model{p};
    return SEVO_OK;
  });
}

void sevo_model_destroy(sevo_model* model) { delete model; }

sevo_status sevo_eigenvalues(const sevo_model* model, double xi_mag, double re[3], double im[3]) {
  if (!model || !re || !im) return fail(SEVO_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (!(xi_mag >= 0.0)) sigmaevo::throw_invalid("xi_mag must be >= 0");
    const auto e = sigmaevo::exact_eigenvalues(model->params, xi_mag);
    for (int j = 0; j < 3; ++j) {
      re[j] = e.lambda[j].real();
      im[j] = e.lambda[j].imag();
    }
    return SEVO_OK;
  });
}

sevo_status sevo_propagate_mode(const sevo_model* model, double xi_mag, const double state_in[8], double t,
                                double state_out[8]) {
  if (!model || !state_in || !state_out) return fail(SEVO_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (!(xi_mag >= 0.0) || !(t >= 0.0)) sigmaevo::throw_invalid("xi_mag and t must be >= 0");
    sigmaevo::Vec4 v;
    for (int j = 0; j < 4; ++j) v(j) = {state_in[2 * j], state_in[2 * j + 1]};
    const auto s = sigmaevo::propagate_mode(model->params, xi_mag, sigmaevo::ModeState::from_vector(v), t);
    const auto w = s.as_vector();
    for (int j = 0; j < 4; ++j) {
      state_out[2 * j] = w(j).real();
      state_out[2 * j + 1] = w(j).imag();
    }
    return SEVO_OK;
  });
}

sevo_status sevo_p_crit(int n, double m, double sigma, double* out) {
  if (!out) return fail(SEVO_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = sigmaevo::p_crit(n, m, sigma);
    return SEVO_OK;
  });
}

sevo_status sevo_run(const char* subcommand, const char* config_json, const char* out_dir, uint64_t seed,
                     sevo_result** out) {
  if (!subcommand || !config_json || !out) return fail(SEVO_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  const auto sc = sigmaevo::subcommand_from_string(subcommand);
  if (!sc) return fail(SEVO_INVALID_ARGUMENT, std::string("unknown subcommand '") + subcommand + "'");
  return guarded([&] {
    auto* r = new sevo_result{sigmaevo::run_subcommand(*sc, config_json, seed)};
    *out = r;
    if (out_dir) sigmaevo::write_outcome(r->outcome, out_dir);
    switch (r->outcome.exit_code) {
      case sigmaevo::exit_ok: return SEVO_OK;
      case sigmaevo::exit_config: return fail(SEVO_CONFIG, "configuration rejected; see summary");
      case sigmaevo::exit_numeric: return fail(SEVO_NUMERIC, "numeric failure; see summary");
      default: return fail(SEVO_CHECK_FAILED, "one or more checks failed; see summary");
    }
  });
}

int sevo_result_exit_code(const sevo_result* result) { return result ? result->outcome.exit_code : -1; }

const char* sevo_result_summary(const sevo_result* result) {
  return result ? result->outcome.summary.c_str() : nullptr;
}

const char* sevo_result_manifest(const sevo_result* result) {
  return result ? result->outcome.manifest.c_str() : nullptr;
}

void sevo_result_destroy(sevo_result* result) { delete result; }

const char* sevo_last_error(void) { return g_last_error.c_str(); }

const char* sevo_status_string(sevo_status status) {
  switch (status) {
    case SEVO_OK: return "ok";
    case SEVO_CONFIG: return "config error";
    case SEVO_NUMERIC: return "numeric failure";
    case SEVO_CHECK_FAILED: return "check failed";
    case SEVO_INVALID_ARGUMENT: return "invalid argument";
    case SEVO_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sevo_version(void) { return sigmaevo::library_version(); }

}  // extern "C"
