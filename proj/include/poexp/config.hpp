#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "poexp/errors.hpp"
#include "poexp/finite_pmf.hpp"
#include "poexp/tabulated_function.hpp"

namespace poexp {

struct DistributionSpec {
    enum class Kind { Bernoulli, Binomial, Poisson, Pmf };
    Kind kind = Kind::Bernoulli;
    double p = 0;
    int n = 0;
    double lambda = 0;
    std::optional<double> tailTol; // poisson truncation override
    std::vector<double> weights;
};

struct FunctionSpec {
    enum class Kind { Polynomial, Indicator, Monomial, Table };
    Kind kind = Kind::Monomial;
    std::vector<double> coefficients;
    std::vector<Index> points;
    double power = 0;
    std::vector<double> values;
    std::optional<GrowthEnvelope<double>> envelope;

    /// Growth exponent of the function, known before tabulation.
    double growthExponent() const {
        switch (kind) {
        case Kind::Polynomial:
            return coefficients.empty() ? 0.0 : double(coefficients.size() - 1);
        case Kind::Indicator:
            return 0.0;
        case Kind::Monomial:
            return power;
        case Kind::Table:
            return envelope ? envelope->exponent : 0.0;
        }
        return 0.0;
    }
};

struct ReportOptions {
    bool includeBounds = true;
    bool includeOracle = true;
    std::string format = "json";
};

struct ProblemConfig {
    int order = 0;
    double tailTol = 1e-12;
    std::optional<Index> gridBound;
    std::vector<DistributionSpec> variables;
    FunctionSpec function;
    ReportOptions report;
};

namespace detail {

inline const nlohmann::json& requireField(const nlohmann::json& obj, const std::string& key,
                                          const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ConfigError("missing field: " + path + key);
    }
    return obj.at(key);
}

inline double asNumber(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError("field is not a number: " + path);
    return v.get<double>();
}

inline int asInt(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError("field is not an integer: " + path);
    return v.get<int>();
}

inline bool asBool(const nlohmann::json& v, const std::string& path) {
    if (!v.is_boolean()) throw ConfigError("field is not a boolean: " + path);
    return v.get<bool>();
}

inline std::string asString(const nlohmann::json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError("field is not a string: " + path);
    return v.get<std::string>();
}

inline std::vector<double> asNumberArray(const nlohmann::json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError("field is not an array: " + path);
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(asNumber(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline DistributionSpec parseDistribution(const nlohmann::json& j, const std::string& path) {
    DistributionSpec spec;
    const std::string kind = asString(requireField(j, "kind", path), path + "kind");
    if (kind == "bernoulli") {
        spec.kind = DistributionSpec::Kind::Bernoulli;
        spec.p = asNumber(requireField(j, "p", path), path + "p");
    } else if (kind == "binomial") {
        spec.kind = DistributionSpec::Kind::Binomial;
        spec.n = asInt(requireField(j, "n", path), path + "n");
        spec.p = asNumber(requireField(j, "p", path), path + "p");
    } else if (kind == "poisson") {
        spec.kind = DistributionSpec::Kind::Poisson;
        spec.lambda = asNumber(requireField(j, "lambda", path), path + "lambda");
        if (j.contains("tail_tol")) {
            spec.tailTol = asNumber(j.at("tail_tol"), path + "tail_tol");
        }
    } else if (kind == "pmf") {
        spec.kind = DistributionSpec::Kind::Pmf;
        spec.weights = asNumberArray(requireField(j, "weights", path), path + "weights");
    } else {
        throw ConfigError("unknown distribution kind at " + path + "kind: " + kind);
    }
    return spec;
}

inline FunctionSpec parseFunction(const nlohmann::json& j, const std::string& path) {
    FunctionSpec spec;
    const std::string kind = asString(requireField(j, "kind", path), path + "kind");
    if (kind == "polynomial") {
        spec.kind = FunctionSpec::Kind::Polynomial;
        spec.coefficients =
            asNumberArray(requireField(j, "coefficients", path), path + "coefficients");
        if (spec.coefficients.empty()) throw ConfigError("empty array: " + path + "coefficients");
    } else if (kind == "indicator") {
        spec.kind = FunctionSpec::Kind::Indicator;
        const auto pts = asNumberArray(requireField(j, "points", path), path + "points");
        for (double v : pts) spec.points.push_back(static_cast<Index>(v));
    } else if (kind == "monomial") {
        spec.kind = FunctionSpec::Kind::Monomial;
        spec.power = asNumber(requireField(j, "power", path), path + "power");
    } else if (kind == "table") {
        spec.kind = FunctionSpec::Kind::Table;
        spec.values = asNumberArray(requireField(j, "values", path), path + "values");
        const auto& env = requireField(j, "envelope", path);
        const std::string envPath = path + "envelope.";
        spec.envelope = GrowthEnvelope<double>{
            asNumber(requireField(env, "bound", envPath), envPath + "bound"),
            asNumber(requireField(env, "exponent", envPath), envPath + "exponent")};
    } else {
        throw ConfigError("unknown function kind at " + path + "kind: " + kind);
    }
    return spec;
}

} // namespace detail

inline ProblemConfig parseProblemConfig(const nlohmann::json& j) {
    ProblemConfig config;
    config.order = detail::asInt(detail::requireField(j, "order", ""), "order");
    if (config.order < 0) throw ConfigError("field out of range: order must be >= 0");
    if (j.contains("tail_tol")) {
        config.tailTol = detail::asNumber(j.at("tail_tol"), "tail_tol");
        if (!(config.tailTol > 0)) throw ConfigError("field out of range: tail_tol must be > 0");
    }
    if (j.contains("grid_bound")) {
        config.gridBound = detail::asInt(j.at("grid_bound"), "grid_bound");
    }
    const auto& vars = detail::requireField(j, "variables", "");
    if (!vars.is_array() || vars.empty()) {
        throw ConfigError("field must be a non-empty array: variables");
    }
    for (std::size_t i = 0; i < vars.size(); ++i) {
        config.variables.push_back(
            detail::parseDistribution(vars[i], "variables[" + std::to_string(i) + "]."));
    }
    config.function = detail::parseFunction(detail::requireField(j, "function", ""), "function.");
    if (j.contains("report")) {
        const auto& rep = j.at("report");
        if (rep.contains("include_bounds")) {
            config.report.includeBounds =
                detail::asBool(rep.at("include_bounds"), "report.include_bounds");
        }
        if (rep.contains("include_oracle")) {
            config.report.includeOracle =
                detail::asBool(rep.at("include_oracle"), "report.include_oracle");
        }
        if (rep.contains("format")) {
            config.report.format = detail::asString(rep.at("format"), "report.format");
            if (config.report.format != "json" && config.report.format != "text") {
                throw ConfigError("field out of range: report.format must be json or text");
            }
        }
    }
    return config;
}

inline ProblemConfig parseProblemConfig(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parseProblemConfig(j);
}

/// Instantiates the component laws named by the config.
inline std::vector<FinitePmf<double>> buildComponents(const ProblemConfig& config) {
    std::vector<FinitePmf<double>> out;
    for (const DistributionSpec& spec : config.variables) {
        switch (spec.kind) {
        case DistributionSpec::Kind::Bernoulli:
            out.push_back(FinitePmf<double>::bernoulli(spec.p));
            break;
        case DistributionSpec::Kind::Binomial:
            out.push_back(FinitePmf<double>::binomial(spec.n, spec.p));
            break;
        case DistributionSpec::Kind::Poisson:
            out.push_back(FinitePmf<double>::poissonTruncated(
                spec.lambda, spec.tailTol.value_or(config.tailTol)));
            break;
        case DistributionSpec::Kind::Pmf: {
            Eigen::ArrayXd w(static_cast<Index>(spec.weights.size()));
            for (Index i = 0; i < w.size(); ++i) w[i] = spec.weights[static_cast<std::size_t>(i)];
            out.push_back(FinitePmf<double>::fromWeights(std::move(w)));
            break;
        }
        }
    }
    return out;
}

/// Tabulates the configured test function on [0, gridBound].
inline TabulatedFunction<double> buildFunction(const FunctionSpec& spec, Index gridBound) {
    switch (spec.kind) {
    case FunctionSpec::Kind::Polynomial:
        return TabulatedFunction<double>::fromPolynomial(spec.coefficients, gridBound);
    case FunctionSpec::Kind::Indicator:
        return TabulatedFunction<double>::fromIndicator(spec.points, gridBound);
    case FunctionSpec::Kind::Monomial:
        return TabulatedFunction<double>::fromMonomial(spec.power, gridBound);
    case FunctionSpec::Kind::Table: {
        if (static_cast<Index>(spec.values.size()) < gridBound + 1) {
            throw GridTooShort("table function: need " + std::to_string(gridBound + 1) +
                               " values, got " + std::to_string(spec.values.size()));
        }
        Eigen::ArrayXd v(gridBound + 1);
        for (Index i = 0; i <= gridBound; ++i) v[i] = spec.values[static_cast<std::size_t>(i)];
        return TabulatedFunction<double>::fromValues(std::move(v), *spec.envelope);
    }
    }
    throw BadParameter("buildFunction: unreachable");
}

} // namespace poexp
