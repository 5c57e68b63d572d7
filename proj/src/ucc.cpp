#include "hamvqe/ucc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <map>
#include <tuple>

#include "hamvqe/error.hpp"

namespace hamvqe {

namespace {

using Complex = std::complex<double>;

// Pauli polynomial with complex weights, keyed by string for deterministic order.
using Polynomial = std::map<std::vector<Pauli>, Complex>;

// Single-qubit product a*b = phase * c.
std::pair<Complex, Pauli> multiply(Pauli a, Pauli b) {
    if (a == Pauli::I) {
        return {1.0, b};
    }
    if (b == Pauli::I) {
        return {1.0, a};
    }
    if (a == b) {
        return {1.0, Pauli::I};
    }
    const Complex i(0.0, 1.0);
    // XY = iZ, YZ = iX, ZX = iY and reversed with -i.
    const int ia = static_cast<int>(a);
    const int ib = static_cast<int>(b);
    const auto c = static_cast<Pauli>(6 - ia - ib);
    const bool cyclic = (ia % 3) + 1 == ib;
    return {cyclic ? i : -i, c};
}

Polynomial multiply(const Polynomial &lhs, const Polynomial &rhs) {
    Polynomial out;
    for (const auto &[la, ca] : lhs) {
        for (const auto &[lb, cb] : rhs) {
            std::vector<Pauli> ops(la.size());
            Complex phase = ca * cb;
            for (std::size_t j = 0; j < la.size(); ++j) {
                auto [ph, op] = multiply(la[j], lb[j]);
                phase *= ph;
                ops[j] = op;
            }
            out[ops] += phase;
        }
    }
    return out;
}

// a_j (annihilate) or a+_j (create) under Jordan-Wigner, bit 1 = occupied.
Polynomial ladder(std::size_t j, std::size_t n, bool create) {
    std::vector<Pauli> base(n, Pauli::I);
    for (std::size_t k = 0; k < j; ++k) {
        base[k] = Pauli::Z;
    }
    auto x = base;
    auto y = base;
    x[j] = Pauli::X;
    y[j] = Pauli::Y;
    Polynomial out;
    out[x] = 0.5;
    out[y] = create ? Complex(0.0, -0.5) : Complex(0.0, 0.5);
    return out;
}

Polynomial product(const std::vector<Polynomial> &ops) {
    Polynomial acc = ops.front();
    for (std::size_t k = 1; k < ops.size(); ++k) {
        acc = multiply(acc, ops[k]);
    }
    return acc;
}

// Hermitian G = i (T - T+) as real-weighted factors.
Generator hermitian_generator(const Polynomial &t, const Polynomial &t_dagger) {
    Polynomial g;
    const Complex i(0.0, 1.0);
    for (const auto &[s, c] : t) {
        g[s] += i * c;
    }
    for (const auto &[s, c] : t_dagger) {
        g[s] -= i * c;
    }
    std::vector<Factor> factors;
    for (const auto &[s, c] : g) {
        if (std::abs(c) < 1e-14) {
            continue;
        }
        if (std::abs(c.imag()) > 1e-12) {
            throw NumericalError("excitation generator is not Hermitian");
        }
        factors.push_back({c.real(), PauliString(s)});
    }
    return Generator(std::move(factors));
}

void check_index(std::size_t idx, std::size_t n) {
    if (idx >= n) {
        throw DimensionError("orbital index " + std::to_string(idx) + " out of range for " + std::to_string(n) +
                             " qubits");
    }
}

bool is_alpha(std::size_t orbital) { return orbital % 2 == 0; }

int alpha_count(std::initializer_list<std::size_t> orbitals) {
    return static_cast<int>(std::count_if(orbitals.begin(), orbitals.end(), is_alpha));
}

std::vector<GateStep> trotterized(std::size_t parameters, std::size_t trotter_steps) {
    std::vector<GateStep> steps;
    const double scale = 1.0 / static_cast<double>(trotter_steps);
    for (std::size_t r = 0; r < trotter_steps; ++r) {
        for (std::size_t k = 0; k < parameters; ++k) {
            steps.push_back({k, scale});
        }
    }
    return steps;
}

void check_counts(std::size_t n_spin_orbitals, std::size_t n_electrons, std::size_t trotter_steps) {
    if (n_spin_orbitals == 0) {
        throw DimensionError("need at least one spin orbital");
    }
    if (n_electrons > n_spin_orbitals) {
        throw DimensionError(std::to_string(n_electrons) + " electrons do not fit in " +
                             std::to_string(n_spin_orbitals) + " spin orbitals");
    }
    if (trotter_steps == 0) {
        throw DimensionError("trotter steps must be at least 1");
    }
}

struct Double {
    std::size_t p, q, r, s;
};

Ansatz assemble(std::size_t n, std::size_t n_electrons, std::size_t trotter_steps,
                std::vector<std::pair<std::size_t, std::size_t>> singles, std::vector<Double> doubles) {
    // singles hold (q, p): annihilate q, create p
    std::sort(singles.begin(), singles.end());
    std::sort(doubles.begin(), doubles.end(), [](const Double &a, const Double &b) {
        return std::tie(a.r, a.s, a.p, a.q) < std::tie(b.r, b.s, b.p, b.q);
    });
    std::vector<Generator> generators;
    for (const auto &[q, p] : singles) {
        generators.push_back(jw_single_excitation(p, q, n));
    }
    for (const auto &d : doubles) {
        generators.push_back(jw_double_excitation(d.p, d.q, d.r, d.s, n));
    }
    auto steps = trotterized(generators.size(), trotter_steps);
    return Ansatz(hartree_fock_reference(n, n_electrons), std::move(generators), std::move(steps));
}

} // namespace

Generator::Generator(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
        throw DimensionError("generator needs at least one factor");
    }
    const std::size_t n = factors_.front().string.n_qubits();
    for (std::size_t a = 0; a < factors_.size(); ++a) {
        if (factors_[a].string.n_qubits() != n) {
            throw DimensionError("generator factors have different widths");
        }
        for (std::size_t b = a + 1; b < factors_.size(); ++b) {
            if (!factors_[a].string.commutes_with(factors_[b].string)) {
                throw DimensionError("generator factors " + format_pauli(factors_[a].string) + " and " +
                                     format_pauli(factors_[b].string) + " do not commute");
            }
        }
    }
}

PauliSum Generator::as_sum() const {
    PauliSum sum(n_qubits());
    for (const auto &f : factors_) {
        sum.add(f.prefactor, f.string);
    }
    return sum;
}

Ansatz::Ansatz(std::string reference, std::vector<Generator> generators)
    : Ansatz(std::move(reference), std::move(generators), {}) {
    steps_ = trotterized(generators_.size(), 1);
}

Ansatz::Ansatz(std::string reference, std::vector<Generator> generators, std::vector<GateStep> steps)
    : reference_(std::move(reference)), generators_(std::move(generators)), steps_(std::move(steps)) {
    if (reference_.empty()) {
        throw DimensionError("ansatz reference is empty");
    }
    for (std::size_t j = 0; j < reference_.size(); ++j) {
        if (reference_[j] != '0' && reference_[j] != '1') {
            throw ParseError("invalid bit in reference '" + reference_ + "'", j);
        }
    }
    for (const auto &g : generators_) {
        if (g.n_qubits() != reference_.size()) {
            throw DimensionError("generator width " + std::to_string(g.n_qubits()) + " does not match reference '" +
                                 reference_ + "'");
        }
    }
    for (const auto &s : steps_) {
        if (s.parameter >= generators_.size()) {
            throw DimensionError("gate step refers to missing parameter " + std::to_string(s.parameter));
        }
    }
}

std::vector<Gate> Ansatz::gates() const {
    std::vector<Gate> out;
    for (const auto &s : steps_) {
        for (const auto &f : generators_[s.parameter].factors()) {
            out.push_back({s.parameter, f.prefactor * s.scale, &f.string});
        }
    }
    return out;
}

Ansatz h2_ansatz() {
    return Ansatz("01", {Generator({{1.0, parse_pauli("XY", 2)}})});
}

Ansatz lih_ansatz() {
    return Ansatz("001", {Generator({{1.0, parse_pauli("XYI", 3)}}), Generator({{1.0, parse_pauli("XIY", 3)}})});
}

Generator jw_single_excitation(std::size_t p, std::size_t q, std::size_t n_qubits) {
    check_index(p, n_qubits);
    check_index(q, n_qubits);
    if (p == q) {
        throw DimensionError("single excitation needs distinct orbitals");
    }
    const Polynomial t = multiply(ladder(p, n_qubits, true), ladder(q, n_qubits, false));
    const Polynomial td = multiply(ladder(q, n_qubits, true), ladder(p, n_qubits, false));
    return hermitian_generator(t, td);
}

Generator jw_double_excitation(std::size_t p, std::size_t q, std::size_t r, std::size_t s, std::size_t n_qubits) {
    for (auto idx : {p, q, r, s}) {
        check_index(idx, n_qubits);
    }
    const std::vector<std::size_t> idx{p, q, r, s};
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = a + 1; b < 4; ++b) {
            if (idx[a] == idx[b]) {
                throw DimensionError("double excitation needs four distinct orbitals");
            }
        }
    }
    const Polynomial t = product({ladder(p, n_qubits, true), ladder(q, n_qubits, true), ladder(r, n_qubits, false),
                                  ladder(s, n_qubits, false)});
    const Polynomial td = product({ladder(s, n_qubits, true), ladder(r, n_qubits, true), ladder(q, n_qubits, false),
                                   ladder(p, n_qubits, false)});
    return hermitian_generator(t, td);
}

std::string hartree_fock_reference(std::size_t n_spin_orbitals, std::size_t n_electrons) {
    std::string bits(n_spin_orbitals, '0');
    std::fill_n(bits.begin(), n_electrons, '1');
    return bits;
}

Ansatz uccsd_ansatz(std::size_t n_spin_orbitals, std::size_t n_electrons, std::size_t trotter_steps) {
    check_counts(n_spin_orbitals, n_electrons, trotter_steps);
    const std::size_t n = n_spin_orbitals;
    std::vector<std::pair<std::size_t, std::size_t>> singles;
    std::vector<Double> doubles;
    for (std::size_t q = 0; q < n_electrons; ++q) {
        for (std::size_t p = n_electrons; p < n; ++p) {
            if (is_alpha(p) == is_alpha(q)) {
                singles.emplace_back(q, p);
            }
        }
    }
    for (std::size_t r = 0; r < n_electrons; ++r) {
        for (std::size_t s = r + 1; s < n_electrons; ++s) {
            for (std::size_t p = n_electrons; p < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    if (alpha_count({p, q}) == alpha_count({r, s})) {
                        doubles.push_back({p, q, r, s});
                    }
                }
            }
        }
    }
    return assemble(n, n_electrons, trotter_steps, std::move(singles), std::move(doubles));
}

Ansatz uccgsd_ansatz(std::size_t n_spin_orbitals, std::size_t n_electrons, std::size_t trotter_steps) {
    check_counts(n_spin_orbitals, n_electrons, trotter_steps);
    const std::size_t n = n_spin_orbitals;
    std::vector<std::pair<std::size_t, std::size_t>> singles;
    std::vector<Double> doubles;
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t p = q + 1; p < n; ++p) {
            if (is_alpha(p) == is_alpha(q)) {
                singles.emplace_back(q, p);
            }
        }
    }
    // Each unordered pair of disjoint pairs once; the pair holding the lower
    // index is annihilated.
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
            for (std::size_t p = r + 1; p < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    if (p == s || q == s) {
                        continue;
                    }
                    if (alpha_count({p, q}) == alpha_count({r, s})) {
                        doubles.push_back({p, q, r, s});
                    }
                }
            }
        }
    }
    return assemble(n, n_electrons, trotter_steps, std::move(singles), std::move(doubles));
}

Ansatz ansatz_from_name(std::string_view name) {
    if (name == "h2") {
        return h2_ansatz();
    }
    if (name == "lih") {
        return lih_ansatz();
    }
    const auto colon = name.find(':');
    const std::string_view kind = name.substr(0, colon);
    if (colon == std::string_view::npos || (kind != "uccsd" && kind != "uccgsd")) {
        throw ParseError("unknown ansatz '" + std::string(name) + "' (expected h2, lih, uccsd:o,e,t or uccgsd:o,e,t)",
                         0);
    }
    std::size_t values[3] = {0, 0, 0};
    std::size_t pos = colon + 1;
    for (int k = 0; k < 3; ++k) {
        const char *first = name.data() + pos;
        const char *last = name.data() + name.size();
        auto [ptr, ec] = std::from_chars(first, last, values[k]);
        if (ec != std::errc() || ptr == first) {
            throw ParseError("expected an integer in ansatz '" + std::string(name) + "'", pos);
        }
        pos = static_cast<std::size_t>(ptr - name.data());
        if (k < 2) {
            if (pos >= name.size() || name[pos] != ',') {
                throw ParseError("expected ',' in ansatz '" + std::string(name) + "'", pos);
            }
            ++pos;
        }
    }
    if (pos != name.size()) {
        throw ParseError("trailing characters in ansatz '" + std::string(name) + "'", pos);
    }
    return kind == "uccsd" ? uccsd_ansatz(values[0], values[1], values[2])
                           : uccgsd_ansatz(values[0], values[1], values[2]);
}

} // namespace hamvqe
