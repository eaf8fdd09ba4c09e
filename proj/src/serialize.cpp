#include "grassmann/serialize.hpp"

#include "grassmann/error.hpp"
#include "grassmann/matrix_io.hpp"

namespace grassmann {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::parse_error, std::string("missing field '") + key + "'");
  return j.at(key);
}

const char* tag_name(ClassTag tag) {
  switch (tag) {
    case ClassTag::unrestricted: return "unrestricted";
    case ClassTag::trace_class_emulated: return "trace_class_emulated";
    case ClassTag::compact_emulated: return "compact_emulated";
  }
  return "unrestricted";
}

ClassTag tag_from_name(const std::string& s) {
  if (s == "unrestricted") return ClassTag::unrestricted;
  if (s == "trace_class_emulated") return ClassTag::trace_class_emulated;
  if (s == "compact_emulated") return ClassTag::compact_emulated;
  throw Error(ErrorKind::parse_error, "unknown class tag '" + s + "'");
}

json profile_to_json(const DecayProfile& p) {
  switch (p.kind) {
    case DecayProfile::Kind::zero: return json{{"kind", "zero"}};
    case DecayProfile::Kind::geometric: return json{{"kind", "geometric"}, {"r", p.param}};
    case DecayProfile::Kind::power: return json{{"kind", "power"}, {"alpha", p.param}};
  }
  return json{{"kind", "zero"}};
}

DecayProfile profile_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "zero") return DecayProfile::zero();
  if (kind == "geometric") return DecayProfile::geometric(field(j, "r").get<double>());
  if (kind == "power") return DecayProfile::power(field(j, "alpha").get<double>());
  throw Error(ErrorKind::parse_error, "unknown decay profile '" + kind + "'");
}

template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, e.what());
  }
}

}  // namespace

json to_json(const Subspace& s) { return matrix_to_json(s.basis()); }

Subspace subspace_from_json(const json& j) {
  const Mat basis = matrix_from_json(j);
  const Mat gram = basis.adjoint() * basis - Mat::Identity(basis.cols(), basis.cols());
  // Keep an orthonormal basis as written so serialization round-trips exactly.
  if (spectral_norm_at_most(gram, 1e-12)) return Subspace::from_orthonormal(basis);
  return Subspace::from_spanning(basis);
}

json to_json(const ChartId& c) {
  return json{{"F", to_json(c.f())},
              {"G", to_json(c.g())},
              {"flavor", c.flavor() == ChartFlavor::hilbert ? "hilbert" : "general"}};
}

ChartId chart_from_json(const json& j) {
  return guarded([&] {
    const std::string flavor = j.value("flavor", "general");
    if (flavor != "general" && flavor != "hilbert")
      throw Error(ErrorKind::parse_error, "unknown chart flavor '" + flavor + "'");
    return ChartId(subspace_from_json(field(j, "F")), subspace_from_json(field(j, "G")),
                   flavor == "hilbert" ? ChartFlavor::hilbert : ChartFlavor::general);
  });
}

json to_json(const ChartPoint& p) {
  return json{{"chart", to_json(p.chart)}, {"A", matrix_to_json(p.A)}};
}

ChartPoint point_from_json(const json& j) {
  return ChartPoint(chart_from_json(field(j, "chart")), matrix_from_json(field(j, "A")));
}

json to_json(const TangentVector& v) {
  return json{{"at", to_json(v.at)}, {"X", matrix_to_json(v.X)}};
}

TangentVector tangent_from_json(const json& j) {
  return TangentVector(point_from_json(field(j, "at")), matrix_from_json(field(j, "X")));
}

json to_json(const Covector& c) {
  json j{{"at", to_json(c.at)}, {"mu", matrix_to_json(c.mu)}, {"class_tag", tag_name(c.tag)}};
  if (c.decay) j["decay"] = profile_to_json(*c.decay);
  return j;
}

Covector covector_from_json(const json& j) {
  return guarded([&] {
    std::optional<DecayProfile> decay;
    if (j.contains("decay")) decay = profile_from_json(j.at("decay"));
    return Covector(point_from_json(field(j, "at")), matrix_from_json(field(j, "mu")),
                    tag_from_name(j.value("class_tag", "unrestricted")), decay);
  });
}

json to_json(const TensorCovector& t) {
  json terms = json::array();
  for (const auto& term : t.terms)
    terms.push_back(json{{"x", vector_to_json(term.x)}, {"y", vector_to_json(term.y)}});
  return json{{"at", to_json(t.at)}, {"terms", std::move(terms)}};
}

TensorCovector tensor_from_json(const json& j) {
  return guarded([&] {
    std::vector<TensorTerm> terms;
    for (const json& term : field(j, "terms"))
      terms.push_back(TensorTerm{vector_from_json(field(term, "x")),
                                 vector_from_json(field(term, "y"))});
    return TensorCovector(point_from_json(field(j, "at")), std::move(terms));
  });
}

}  // namespace grassmann
