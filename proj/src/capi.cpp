#include "qindep/qindep.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "qindep/bounds.hpp"
#include "qindep/errors.hpp"
#include "qindep/independence.hpp"
#include "qindep/observables.hpp"
#include "qindep/oracle.hpp"
#include "qindep/serialize.hpp"

struct qi_observed {
  qindep::ObservedJoint joint;
};

struct qi_propensity {
  qindep::GridPropensity grid;
};

namespace {

thread_local std::string g_last_error;

qi_status fail(qi_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
qi_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const qindep::ParseError& e) {
    std::string msg = e.what();
    if (e.line() > 0) msg = "line " + std::to_string(e.line()) + ": " + msg;
    return fail(QI_ERR_PARSE, msg);
  } catch (const qindep::DegenerateDataError& e) {
    return fail(QI_ERR_DEGENERATE, e.what());
  } catch (const qindep::ConsistencyError& e) {
    return fail(QI_ERR_CONSISTENCY, e.what());
  } catch (const qindep::InfeasibleProgramError& e) {
    return fail(QI_ERR_INFEASIBLE, e.what());
  } catch (const qindep::EvaluationError& e) {
    return fail(QI_ERR_EVALUATION, e.what());
  } catch (const std::out_of_range& e) {
    return fail(QI_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(QI_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QI_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qindep::IndependenceSpec to_spec(const qi_spec* spec) {
  if (!spec) throw std::invalid_argument("spec is null");
  qindep::IndependenceSpec s;
  switch (spec->kind) {
    case QI_SPEC_FULL:
      s = qindep::IndependenceSpec::full();
      break;
    case QI_SPEC_MEAN:
      s = qindep::IndependenceSpec::mean();
      break;
    case QI_SPEC_T_INTERVAL:
      s = qindep::IndependenceSpec::t_interval(spec->a, spec->b);
      break;
    case QI_SPEC_U_INTERVAL:
      s = qindep::IndependenceSpec::u_interval(spec->a, spec->b);
      break;
    case QI_SPEC_T_POINTS:
      if (!spec->points && spec->n_points > 0) {
        throw std::invalid_argument("spec points are null");
      }
      s = qindep::IndependenceSpec::t_points(std::vector<double>(
          spec->points, spec->points + spec->n_points));
      break;
    default:
      throw std::invalid_argument("unknown spec kind");
  }
  if (spec->tolerance > 0.0) s = s.with_tolerance(spec->tolerance);
  return s;
}

template <class T>
void require_out(T* p, const char* name) {
  if (!p) throw std::invalid_argument(std::string(name) + " is null");
}

}  // namespace

extern "C" {

const char* qi_last_error(void) { return g_last_error.c_str(); }

const char* qi_version(void) { return "1.0.0"; }

void qi_string_free(char* s) { std::free(s); }

qi_status qi_observed_from_dgp(double gamma, double pi, double p1,
                               size_t n_knots, qi_observed** out) {
  return guarded([&] {
    require_out(out, "out");
    *out = nullptr;
    qindep::TruncNormDgp dgp{gamma, pi, p1};
    *out = new qi_observed{qindep::dgp_to_observed(dgp, n_knots)};
    return QI_OK;
  });
}

qi_status qi_observed_from_csv(const char* path, qi_observed** out) {
  return guarded([&] {
    require_out(out, "out");
    require_out(path, "path");
    *out = nullptr;
    std::ifstream in(path);
    if (!in) return fail(QI_ERR_IO, std::string("cannot open ") + path);
    const auto rows = qindep::read_samples_csv(in);
    *out = new qi_observed{qindep::ingest_samples(rows)};
    return QI_OK;
  });
}

qi_status qi_observed_set_support0(qi_observed* obs, double lo, double hi) {
  return guarded([&] {
    require_out(obs, "obs");
    const auto& q0 = obs->joint.quantile(0);
    if (std::isnan(lo) || std::isnan(hi) || lo > q0.y_first() ||
        hi < q0.y_last()) {
      return fail(QI_ERR_ARGUMENT,
                  "declared support must contain the observed range");
    }
    obs->joint.support0_lo = lo;
    obs->joint.support0_hi = hi;
    return QI_OK;
  });
}

void qi_observed_free(qi_observed* obs) { delete obs; }

qi_status qi_identified_set(const qi_observed* obs, qi_param param, double q,
                            const qi_spec* spec, qi_interval* out,
                            char** warning) {
  return guarded([&] {
    require_out(obs, "obs");
    require_out(out, "out");
    if (warning) *warning = nullptr;
    const auto s = to_spec(spec);
    qindep::IdentifiedSet set;
    if (param == QI_PARAM_ATT) {
      set = qindep::att_set(s, obs->joint);
    } else if (param == QI_PARAM_QTT) {
      set = qindep::qtt_set(q, s, obs->joint);
    } else {
      return fail(QI_ERR_ARGUMENT, "unknown parameter");
    }
    out->lo = set.lo;
    out->hi = set.hi;
    out->interior_sharp = set.interior_sharp ? 1 : 0;
    out->unbounded = set.unbounded ? 1 : 0;
    if (warning && !set.warning.empty()) *warning = dup_string(set.warning);
    return QI_OK;
  });
}

qi_status qi_simulate_dgp(double gamma, double pi, double p1, size_t n,
                          uint64_t seed, const char* path) {
  return guarded([&] {
    require_out(path, "path");
    if (!(gamma > -1.0) || !(p1 >= 0.0 && p1 <= 1.0)) {
      return fail(QI_ERR_ARGUMENT, "need gamma > -1 and p1 in [0, 1]");
    }
    qindep::TruncNormDgp dgp{gamma, pi, p1};
    const auto rows = qindep::sample_dgp(dgp, n, seed);
    std::ofstream f(path);
    if (!f) return fail(QI_ERR_IO, std::string("cannot write ") + path);
    f.precision(17);
    f << "y,x\n";
    for (const auto& r : rows) f << r.y << ',' << r.x << '\n';
    if (!f) return fail(QI_ERR_IO, std::string("write failed: ") + path);
    return QI_OK;
  });
}

qi_status qi_propensity_from_json(const char* json, qi_propensity** out) {
  return guarded([&] {
    require_out(json, "json");
    require_out(out, "out");
    *out = nullptr;
    *out = new qi_propensity{qindep::propensity_from_json(json)};
    return QI_OK;
  });
}

qi_status qi_propensity_to_json(const qi_propensity* p, char** json) {
  return guarded([&] {
    require_out(p, "propensity");
    require_out(json, "json");
    *json = dup_string(qindep::to_json(p->grid).dump());
    return QI_OK;
  });
}

void qi_propensity_free(qi_propensity* p) { delete p; }

qi_status qi_check(const qi_propensity* p, const qi_spec* spec, int* pass,
                   char** report) {
  return guarded([&] {
    require_out(p, "propensity");
    require_out(pass, "pass");
    const auto s = to_spec(spec);
    const auto verdict = qindep::check_independence(p->grid, s);
    *pass = verdict.pass ? 1 : 0;
    if (report) {
      nlohmann::json doc = {
          {"spec", s.describe()},
          {"verdict", qindep::to_json(verdict)},
          {"monotonicity",
           qindep::to_json(qindep::monotonicity_report(p->grid))}};
      *report = dup_string(doc.dump());
    }
    return QI_OK;
  });
}

qi_status qi_verify(const qi_spec* spec, double p_x, size_t n_cells, int* pass,
                    char** report) {
  return guarded([&] {
    require_out(pass, "pass");
    const auto s = to_spec(spec);
    const auto rep = qindep::verify_bounds(s, p_x, n_cells);
    *pass = rep.pass ? 1 : 0;
    if (report) *report = dup_string(qindep::to_json(rep).dump());
    return QI_OK;
  });
}

}  // extern "C"
