#include "ultracoarse.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "classify.hpp"
#include "error.hpp"
#include "json_io.hpp"
#include "rational.hpp"
#include "space.hpp"
#include "tower.hpp"

struct uc_space {
  uc::SpaceSpec spec;
};

struct uc_tower {
  uc::ExplicitTower tower;
};

namespace {

thread_local std::string g_last_error;

uc_status status_of(const uc::Error& e) {
  switch (e.code()) {
    case uc::ErrorCode::InvalidInput: return UC_ERR_INVALID_INPUT;
    case uc::ErrorCode::Hypothesis: return UC_ERR_HYPOTHESIS;
    case uc::ErrorCode::Verification: return UC_ERR_VERIFICATION;
    case uc::ErrorCode::Internal: return UC_ERR_INTERNAL;
  }
  return UC_ERR_INTERNAL;
}

template <typename F>
uc_status guarded(F&& f) {
  try {
    f();
    return UC_OK;
  } catch (const uc::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UC_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

std::string require_text(const char* text, const char* what) {
  if (!text) uc::fail_input(std::string(what) + " must not be NULL");
  return text;
}

std::vector<uc::Rational> parse_scales_csv(const char* csv) {
  std::vector<uc::Rational> scales;
  if (!csv) return scales;
  std::string s(csv);
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto comma = s.find(',', pos);
    auto item = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!item.empty()) scales.push_back(uc::parse_rational(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return scales;
}

const uc_space& deref(const uc_space* s, const char* what) {
  if (!s) uc::fail_input(std::string(what) + " handle must not be NULL");
  return *s;
}

const uc_tower& deref(const uc_tower* t, const char* what) {
  if (!t) uc::fail_input(std::string(what) + " handle must not be NULL");
  return *t;
}

}  // namespace

extern "C" {

const char* uc_last_error(void) { return g_last_error.c_str(); }

void uc_string_free(char* s) { delete[] s; }

uc_status uc_space_parse(const char* json_text, uc_space** out) {
  return guarded([&] {
    auto spec = uc::space_spec_from_json(
        uc::parse_json_text(require_text(json_text, "space JSON")));
    if (out) *out = new uc_space{std::move(spec)};
  });
}

void uc_space_free(uc_space* s) { delete s; }

uc_status uc_space_to_json(const uc_space* s, char** out_json) {
  return guarded([&] {
    emit(out_json,
         uc::dump_json(uc::space_spec_to_json(deref(s, "space").spec)));
  });
}

uc_status uc_space_invariants(const uc_space* s, char** out_json) {
  return guarded([&] {
    auto inv = uc::invariants(deref(s, "space").spec.profile());
    emit(out_json, uc::invariant_pair_to_json(inv).dump() + "\n");
  });
}

uc_status uc_equiv(const uc_space* x, const uc_space* y, uint64_t depth,
                   uint64_t seed, char** out_verdict_json) {
  return guarded([&] {
    auto v = uc::coarse_equivalence_pipeline(deref(x, "space").spec,
                                             deref(y, "space").spec, depth,
                                             seed);
    emit(out_verdict_json, uc::dump_json(uc::verdict_to_json(v)));
  });
}

uc_status uc_embed(const uc_space* x, const uc_space* y, uint64_t depth,
                   uint64_t seed, char** out_verdict_json) {
  return guarded([&] {
    auto v = uc::coarse_embedding_pipeline(deref(x, "space").spec,
                                           deref(y, "space").spec, depth,
                                           seed);
    emit(out_verdict_json, uc::dump_json(uc::verdict_to_json(v)));
  });
}

uc_status uc_verify(const char* cert_json, const uc_space* x,
                    const uc_space* y, const char* scales_csv,
                    char** out_report_json) {
  return guarded([&] {
    auto cert = uc::certificate_from_json(
        uc::parse_json_text(require_text(cert_json, "certificate JSON")));
    auto report =
        uc::verify_certificate(cert, deref(x, "space").spec,
                               deref(y, "space").spec,
                               parse_scales_csv(scales_csv));
    uc::Json j = {{"accepted", report.accepted},
                  {"failure", report.failure},
                  {"forward", uc::certificate_to_json(report.recomputed)
                                  .at("forward")},
                  {"inverse", uc::certificate_to_json(report.recomputed)
                                  .at("inverse")}};
    emit(out_report_json, uc::dump_json(j));
  });
}

uc_status uc_model(const char* kappa, char** out_degrees_json) {
  return guarded([&] {
    auto text = require_text(kappa, "kappa");
    auto c = uc::Cardinal::parse(text);
    if (!c) uc::fail_input("unrecognized cardinal \"" + text + "\"");
    auto model = uc::homogeneous_model(*c);
    emit(out_degrees_json,
         uc::dump_json(uc::cardinal_seq_to_json(model.degrees)));
  });
}

uc_status uc_tower_parse(const char* json_text, uc_tower** out) {
  return guarded([&] {
    auto tower = uc::tower_from_json(
        uc::parse_json_text(require_text(json_text, "tower JSON")));
    if (out) *out = new uc_tower{std::move(tower)};
  });
}

void uc_tower_free(uc_tower* t) { delete t; }

uc_status uc_tower_to_json(const uc_tower* t, char** out_json) {
  return guarded([&] {
    emit(out_json, uc::dump_json(uc::tower_to_json(deref(t, "tower").tower)));
  });
}

uc_status uc_tower_to_dot(const uc_tower* t, char** out_dot) {
  return guarded(
      [&] { emit(out_dot, uc::tower_to_dot(deref(t, "tower").tower)); });
}

uc_status uc_canonical_tower(const uc_space* s, const char* scales_csv,
                             uc_tower** out) {
  return guarded([&] {
    const auto& spec = deref(s, "space").spec;
    if (spec.degree_backed()) {
      uc::fail_input("canonical towers require a finite space table");
    }
    auto scales = parse_scales_csv(scales_csv);
    if (scales.empty()) scales = spec.finite->realized_scales();
    auto built = uc::canonical_tower(*spec.finite, scales);
    if (out) *out = new uc_tower{std::move(built.tower)};
  });
}

uc_status uc_oracle_space(const uc_space* s, char** out_report_json) {
  return guarded([&] {
    const auto& spec = deref(s, "space").spec;
    if (spec.degree_backed()) {
      uc::fail_input("the covering oracle requires a finite space table");
    }
    const auto& X = *spec.finite;
    auto scales = X.realized_scales();
    scales.insert(scales.begin(), uc::Rational(0));
    std::uint64_t checked = 0;
    uc::Json mismatches = uc::Json::array();
    for (std::size_t i = 0; i < X.size(); ++i) {
      for (const auto& eps : scales) {
        for (const auto& delta : scales) {
          auto fast = X.cov(i, eps, delta);
          auto slow = X.min_cover_bruteforce(i, eps, delta);
          ++checked;
          if (fast != slow) {
            mismatches.push_back({{"point", X.point(i)},
                                  {"eps", uc::format_rational(eps)},
                                  {"delta", uc::format_rational(delta)},
                                  {"cov", fast},
                                  {"bruteforce", slow}});
          }
        }
      }
    }
    uc::Json j = {{"oracle", "cov-vs-bruteforce"},
                  {"checked", checked},
                  {"mismatches", mismatches}};
    emit(out_report_json, uc::dump_json(j));
  });
}

uc_status uc_oracle_tower(const uc_tower* t, char** out_report_json) {
  return guarded([&] {
    const auto& T = deref(t, "tower").tower;
    auto boundary = T.boundary_space();
    std::uint64_t checked = 0;
    uc::Json mismatches = uc::Json::array();
    for (std::uint64_t lambda = 0; lambda <= T.depth(); ++lambda) {
      for (std::uint64_t l = lambda; l <= T.depth(); ++l) {
        auto bounds = T.deg_bounds(lambda, l);
        std::uint64_t lo = 0, hi = 0;
        for (std::size_t i = 0; i < boundary->size(); ++i) {
          auto c = boundary->cov(i, uc::Rational(static_cast<std::int64_t>(
                                        lambda)),
                                 uc::Rational(static_cast<std::int64_t>(l)));
          if (i == 0 || c < lo) lo = c;
          if (i == 0 || c > hi) hi = c;
        }
        ++checked;
        auto want = std::make_pair(uc::Cardinal::finite(lo),
                                   uc::Cardinal::finite(hi));
        if (boundary->size() > 0 && bounds != want) {
          mismatches.push_back(
              {{"lambda", lambda},
               {"level", l},
               {"deg_bounds", {bounds.first.str(), bounds.second.str()}},
               {"boundary_cov", {want.first.str(), want.second.str()}}});
        }
      }
    }
    uc::Json j = {{"oracle", "deg-bounds-vs-boundary-cov"},
                  {"checked", checked},
                  {"mismatches", mismatches}};
    emit(out_report_json, uc::dump_json(j));
  });
}

}  // extern "C"
