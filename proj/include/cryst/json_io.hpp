#pragma once

#include <json.hpp>
#include <string>

#include "cryst/almost_periodic.hpp"
#include "cryst/experiments.hpp"
#include "cryst/kronecker.hpp"
#include "cryst/lattice.hpp"
#include "cryst/measure.hpp"
#include "cryst/schwartz.hpp"
#include "cryst/test_function.hpp"

namespace cryst {

using Json = nlohmann::json;

/// Parses a file; malformed JSON or I/O failure raises ConfigError.
Json read_json_file(const std::string& path);

Json to_json(const Point& p);
Json to_json(const Complex& c);
Point point_from_json(const Json& j, int dim);
/// A number or [re, im].
Complex complex_from_json(const Json& j);

/// {dim, window, margin?, atoms: [{x, mass: [re, im]}]}
AtomicMeasure measure_from_json(const Json& j);
Json to_json(const AtomicMeasure& m);

/// {dim, window, terms: [{basis: [[..] per basis vector], shift, modes: [{beta, alpha}]}]}
LatticeCombSpec spec_from_json(const Json& j);
Json to_json(const LatticeCombSpec& s);

/// {kind: gaussian|plateau|autocorr|plateau_hat, ...parameters}
TestFunction test_function_from_json(const Json& j, int dim);
Json to_json(const TestFunction& phi);

/// {dim, terms: [{omega, a}]}
TrigPolynomial trig_from_json(const Json& j);
Json to_json(const TrigPolynomial& d);

/// {dim, vectors, targets, eps}; string entries are exact ("sqrt(2)", "1/3").
KroneckerInstance instance_from_json(const Json& j);
Json to_json(const KroneckerInstance& inst);

Json to_json(const IntVector& v);

Json to_json(const GrowthReport& r);
Json to_json(const TranslationBoundReport& r);
Json to_json(const BoundednessCheck& r);
Json to_json(const PartialMassBound& r);
Json to_json(const BohrEstimate& r);
Json to_json(const ParsevalReport& r);
Json to_json(const AlmostPeriodReport& r);
Json to_json(const CoefficientReport& r);
Json to_json(const KroneckerSolution& r);
Json to_json(const RelationCheck& r);
Json to_json(const PowerExpansion& r);
Json to_json(const CertificateResult& r);
Json to_json(const PoissonReport& r);
Json to_json(const Theorem2Report& r);
Json to_json(const Theorem3Report& r);
Json to_json(const AlignmentTrial& r);
Json to_json(const Prop2Certificate& r);
Json to_json(const Prop3Certificate& r);

}  // namespace cryst
