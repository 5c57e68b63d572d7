#include "hamvqe/family.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hamvqe/error.hpp"

namespace hamvqe {

namespace {

std::string format_value(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

Eigen::VectorXd kron(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
    Eigen::VectorXd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

} // namespace

SplineModel::SplineModel(const std::vector<Axis> &axes, Eigen::MatrixXd samples) : samples_(std::move(samples)) {
    Eigen::Index nodes = 1;
    for (const auto &axis : axes) {
        bases_.emplace_back(axis.grid);
        nodes *= static_cast<Eigen::Index>(axis.grid.size());
    }
    if (samples_.cols() != nodes) {
        throw SchemaError("expected " + std::to_string(nodes) + " samples per term, got " +
                          std::to_string(samples_.cols()));
    }
}

Eigen::VectorXd SplineModel::combine(std::span<const double> lambda, std::size_t derivative_axis) const {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
    for (std::size_t a = 0; a < bases_.size(); ++a) {
        const Eigen::VectorXd wa = a == derivative_axis ? bases_[a].derivative_weights(lambda[a])
                                                        : bases_[a].weights(lambda[a]);
        w = kron(w, wa);
    }
    return samples_ * w;
}

Eigen::VectorXd SplineModel::values(std::span<const double> lambda) const { return combine(lambda, bases_.size()); }

Eigen::VectorXd SplineModel::derivative(std::span<const double> lambda, std::size_t axis) const {
    return combine(lambda, axis);
}

HamiltonianFamily::HamiltonianFamily(std::string name, std::size_t n_qubits, std::vector<PauliString> strings,
                                     std::vector<Axis> axes, std::shared_ptr<const CoefficientModel> model,
                                     std::optional<std::vector<double>> reference_energies)
    : name_(std::move(name)), n_qubits_(n_qubits), strings_(std::move(strings)), axes_(std::move(axes)),
      model_(std::move(model)), reference_energies_(std::move(reference_energies)) {
    if (axes_.empty() || axes_.size() > 2) {
        throw SchemaError("family '" + name_ + "' must have one or two lambda axes");
    }
    if (!model_) {
        throw SchemaError("family '" + name_ + "' has no coefficient model");
    }
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        const auto &g = axes_[a].grid;
        if (g.size() < 2) {
            throw SchemaError("axis " + std::to_string(a) + " ('" + axes_[a].name + "') needs at least two nodes");
        }
        for (std::size_t i = 1; i < g.size(); ++i) {
            if (!(g[i] > g[i - 1])) {
                throw SchemaError("axis " + std::to_string(a) + " ('" + axes_[a].name +
                                  "') grid is not strictly increasing at index " + std::to_string(i));
            }
        }
    }
    for (std::size_t t = 0; t < strings_.size(); ++t) {
        if (strings_[t].n_qubits() != n_qubits_) {
            throw SchemaError("term " + std::to_string(t) + " has the wrong width");
        }
        for (std::size_t u = 0; u < t; ++u) {
            if (strings_[u] == strings_[t]) {
                throw SchemaError("term " + std::to_string(t) + " repeats the string of term " + std::to_string(u));
            }
        }
    }
    if (reference_energies_ && reference_energies_->size() != node_count()) {
        throw SchemaError("reference_energies has " + std::to_string(reference_energies_->size()) +
                          " entries, expected " + std::to_string(node_count()));
    }
}

HamiltonianFamily HamiltonianFamily::from_samples(std::string name, std::size_t n_qubits,
                                                  std::vector<PauliString> strings, std::vector<Axis> axes,
                                                  Eigen::MatrixXd samples,
                                                  std::optional<std::vector<double>> reference_energies) {
    if (samples.rows() != static_cast<Eigen::Index>(strings.size())) {
        throw SchemaError("sample rows do not match the term count");
    }
    auto model = std::make_shared<SplineModel>(axes, std::move(samples));
    return HamiltonianFamily(std::move(name), n_qubits, std::move(strings), std::move(axes), std::move(model),
                             std::move(reference_energies));
}

bool HamiltonianFamily::contains(std::span<const double> lambda) const {
    if (lambda.size() != axes_.size()) {
        return false;
    }
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        if (!(lambda[a] >= axes_[a].lower() && lambda[a] <= axes_[a].upper())) {
            return false;
        }
    }
    return true;
}

void HamiltonianFamily::check_domain(std::span<const double> lambda) const {
    if (lambda.size() != axes_.size()) {
        throw DimensionError("family '" + name_ + "' takes " + std::to_string(axes_.size()) +
                             " lambda components, got " + std::to_string(lambda.size()));
    }
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        if (!(lambda[a] >= axes_[a].lower() && lambda[a] <= axes_[a].upper())) {
            throw DomainError("lambda " + axes_[a].name + " = " + format_value(lambda[a]) + " outside [" +
                              format_value(axes_[a].lower()) + ", " + format_value(axes_[a].upper()) + "]");
        }
    }
}

std::vector<double> HamiltonianFamily::clip(std::span<const double> lambda) const {
    if (lambda.size() != axes_.size()) {
        throw DimensionError("clip: wrong number of lambda components");
    }
    std::vector<double> out(lambda.begin(), lambda.end());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        out[a] = std::clamp(out[a], axes_[a].lower(), axes_[a].upper());
    }
    return out;
}

Eigen::VectorXd HamiltonianFamily::coefficients_at(std::span<const double> lambda) const {
    check_domain(lambda);
    Eigen::VectorXd c = model_->values(lambda);
    if (c.size() != static_cast<Eigen::Index>(strings_.size())) {
        throw DimensionError("coefficient model returned the wrong number of terms");
    }
    return c;
}

Eigen::VectorXd HamiltonianFamily::coefficient_derivative(std::span<const double> lambda, std::size_t axis) const {
    check_domain(lambda);
    if (axis >= axes_.size()) {
        throw DimensionError("axis " + std::to_string(axis) + " out of range for family '" + name_ + "'");
    }
    Eigen::VectorXd d = model_->derivative(lambda, axis);
    if (d.size() != static_cast<Eigen::Index>(strings_.size())) {
        throw DimensionError("coefficient model returned the wrong number of terms");
    }
    return d;
}

PauliSum HamiltonianFamily::hamiltonian_at(std::span<const double> lambda) const {
    const Eigen::VectorXd c = coefficients_at(lambda);
    PauliSum h(n_qubits_);
    for (std::size_t t = 0; t < strings_.size(); ++t) {
        h.add(c(static_cast<Eigen::Index>(t)), strings_[t]);
    }
    return h;
}

std::size_t HamiltonianFamily::node_count() const {
    std::size_t n = 1;
    for (const auto &a : axes_) {
        n *= a.grid.size();
    }
    return n;
}

std::vector<std::size_t> HamiltonianFamily::node_indices(std::size_t flat_index) const {
    if (flat_index >= node_count()) {
        throw DimensionError("node " + std::to_string(flat_index) + " out of range");
    }
    std::vector<std::size_t> idx(axes_.size());
    for (std::size_t a = axes_.size(); a-- > 0;) {
        idx[a] = flat_index % axes_[a].grid.size();
        flat_index /= axes_[a].grid.size();
    }
    return idx;
}

std::size_t HamiltonianFamily::flat_index(std::span<const std::size_t> indices) const {
    if (indices.size() != axes_.size()) {
        throw DimensionError("flat_index: wrong number of indices");
    }
    std::size_t flat = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        if (indices[a] >= axes_[a].grid.size()) {
            throw DimensionError("node index out of range on axis '" + axes_[a].name + "'");
        }
        flat = flat * axes_[a].grid.size() + indices[a];
    }
    return flat;
}

std::vector<double> HamiltonianFamily::node(std::size_t flat_index) const {
    const auto idx = node_indices(flat_index);
    std::vector<double> lambda(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        lambda[a] = axes_[a].grid[idx[a]];
    }
    return lambda;
}

HamiltonianFamily parse_family(std::string_view json_text, std::string_view source) {
    using nlohmann::json;
    const std::string where(source);
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw SchemaError(where + ": invalid JSON: " + e.what());
    }
    auto require = [&](const json &obj, const char *key, const std::string &context) -> const json & {
        if (!obj.is_object() || !obj.contains(key)) {
            throw SchemaError(where + ": missing field '" + key + "'" + context);
        }
        return obj.at(key);
    };
    try {
        const std::string name = require(doc, "name", "").get<std::string>();
        const auto n_qubits = require(doc, "n_qubits", "").get<std::size_t>();
        if (n_qubits == 0) {
            throw SchemaError(where + ": n_qubits must be positive");
        }
        const json &lam = require(doc, "lambda", "");
        const json &axes_json = require(lam, "axes", " in 'lambda'");
        const json &grids_json = require(lam, "grids", " in 'lambda'");
        if (!axes_json.is_array() || !grids_json.is_array() || axes_json.size() != grids_json.size()) {
            throw SchemaError(where + ": 'lambda.axes' and 'lambda.grids' must be arrays of equal length");
        }
        std::vector<Axis> axes;
        for (std::size_t a = 0; a < axes_json.size(); ++a) {
            Axis axis{axes_json[a].get<std::string>(), grids_json[a].get<std::vector<double>>()};
            for (std::size_t i = 1; i < axis.grid.size(); ++i) {
                if (!(axis.grid[i] > axis.grid[i - 1])) {
                    throw SchemaError(where + ": grid of axis " + std::to_string(a) + " ('" + axis.name +
                                      "') is not strictly increasing at index " + std::to_string(i));
                }
            }
            axes.push_back(std::move(axis));
        }
        std::size_t nodes = 1;
        for (const auto &a : axes) {
            nodes *= a.grid.size();
        }
        const json &terms = require(doc, "terms", "");
        if (!terms.is_array() || terms.empty()) {
            throw SchemaError(where + ": 'terms' must be a nonempty array");
        }
        std::vector<PauliString> strings;
        Eigen::MatrixXd samples(static_cast<Eigen::Index>(terms.size()), static_cast<Eigen::Index>(nodes));
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const std::string context = " in term " + std::to_string(t);
            const auto label = require(terms[t], "pauli", context).get<std::string>();
            try {
                strings.push_back(parse_pauli(label, n_qubits));
            } catch (const ParseError &e) {
                throw SchemaError(where + ": term " + std::to_string(t) + ": " + e.what());
            }
            const auto coeffs = require(terms[t], "coeffs", context).get<std::vector<double>>();
            if (coeffs.size() != nodes) {
                throw SchemaError(where + ": term " + std::to_string(t) + " has " + std::to_string(coeffs.size()) +
                                  " coefficients, expected " + std::to_string(nodes));
            }
            for (std::size_t k = 0; k < nodes; ++k) {
                samples(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = coeffs[k];
            }
        }
        std::optional<std::vector<double>> reference;
        if (doc.contains("reference_energies")) {
            reference = doc.at("reference_energies").get<std::vector<double>>();
        }
        return HamiltonianFamily::from_samples(name, n_qubits, std::move(strings), std::move(axes),
                                               std::move(samples), std::move(reference));
    } catch (const json::exception &e) {
        throw SchemaError(where + ": " + e.what());
    } catch (const SchemaError &) {
        throw;
    } catch (const Error &e) {
        throw SchemaError(where + ": " + e.what());
    }
}

HamiltonianFamily load_family(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open family file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_family(text.str(), path.string());
}

} // namespace hamvqe
