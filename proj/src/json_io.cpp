#include "qpr/json_io.hpp"

#include "qpr/errors.hpp"

#include <cmath>
#include <complex>
#include <fstream>

namespace qpr {

namespace {

nlohmann::json complex_pair(const std::complex<double>& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

std::complex<double> parse_complex_pair(const nlohmann::json& j, const char* where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw BadInputError(std::string(where) + ": expected a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

nlohmann::json state_to_json(const PureState& s) {
    nlohmann::json amps = nlohmann::json::array();
    for (int k = 0; k < s.dim(); ++k) amps.push_back(complex_pair(s.amps(k)));
    return nlohmann::json{{"dim", s.dim()}, {"amps", std::move(amps)}};
}

PureState state_from_json(const nlohmann::json& j, bool renormalize) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("amps")) {
        throw BadInputError("state: expected an object with \"dim\" and \"amps\"");
    }
    if (!j["dim"].is_number_integer()) throw BadInputError("state: \"dim\" must be an integer");
    int d = j["dim"].get<int>();
    const nlohmann::json& amps = j["amps"];
    if (d < 1 || !amps.is_array() || static_cast<int>(amps.size()) != d) {
        throw BadInputError("state: \"amps\" must hold exactly \"dim\" entries");
    }
    Eigen::VectorXcd v(d);
    for (int k = 0; k < d; ++k) v(k) = parse_complex_pair(amps[k], "state amps");
    double norm = v.norm();
    double drift = std::abs(norm - 1.0);
    if (drift > kStateNormTol && !renormalize) {
        throw NotNormalizedError(norm);
    }
    // Rescaling a vector that is already unit to rounding precision would
    // perturb its low bits and break write/read round trips.
    if (drift <= 1e-13) return PureState{std::move(v)};
    return normalize(v);
}

nlohmann::json distribution_to_json(const ProbabilityDistribution& dist) {
    nlohmann::json probs = nlohmann::json::array();
    for (int k = 0; k < dist.size(); ++k) probs.push_back(dist.probs(k));
    return nlohmann::json{{"dim", dist.size()}, {"probs", std::move(probs)},
                          {"source", dist.source}};
}

ProbabilityDistribution distribution_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("probs") || !j["probs"].is_array()) {
        throw BadInputError("distribution: expected an object with a \"probs\" array");
    }
    const nlohmann::json& probs = j["probs"];
    if (j.contains("dim") &&
        (!j["dim"].is_number_integer() || j["dim"].get<int>() != static_cast<int>(probs.size()))) {
        throw BadInputError("distribution: \"dim\" disagrees with the \"probs\" length");
    }
    Eigen::VectorXd p(static_cast<int>(probs.size()));
    for (int k = 0; k < p.size(); ++k) {
        if (!probs[k].is_number()) throw BadInputError("distribution: probabilities must be numbers");
        p(k) = probs[k].get<double>();
    }
    std::string source = j.value("source", std::string("file"));
    return make_distribution(p, std::move(source));
}

nlohmann::json basis_to_json(const OrthonormalBasis& basis) {
    nlohmann::json rows = nlohmann::json::array();
    for (int k = 0; k < basis.dim(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < basis.dim(); ++j) row.push_back(complex_pair(basis.vectors(k, j)));
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"dim", basis.dim()}, {"basis", to_string(basis.label)},
                          {"rows", std::move(rows)}};
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInputError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw BadInputError(path + ": " + e.what());
    }
    return j;
}

} // namespace qpr
