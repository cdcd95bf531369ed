#include "lvnf/qp_system.hpp"

#include "lvnf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace lvnf {

QPSystem QPSystem::from_doubles(std::vector<std::string> variables,
                                const std::vector<double>& lambda,
                                const std::vector<std::vector<double>>& A,
                                RationalMatrix B,
                                std::optional<std::vector<double>> x0) {
    QPSystem sys;
    sys.variables = std::move(variables);
    sys.lambda = RationalMatrix::column(lambda);
    sys.A = RationalMatrix::from_doubles(A);
    sys.B = std::move(B);
    sys.x0 = std::move(x0);
    return sys;
}

std::vector<double> QPSystem::lambda_doubles() const {
    std::vector<double> out(lambda.rows());
    for (std::size_t i = 0; i < lambda.rows(); ++i) out[i] = lambda(i, 0).to_double();
    return out;
}

std::vector<std::vector<double>> QPSystem::A_doubles() const { return A.to_doubles(); }

std::vector<double> LVSystem::lambda_doubles() const {
    std::vector<double> out(lambda_prime.rows());
    for (std::size_t i = 0; i < lambda_prime.rows(); ++i) out[i] = lambda_prime(i, 0).to_double();
    return out;
}

std::vector<std::vector<double>> LVSystem::A_doubles() const { return A_prime.to_doubles(); }

ValidationReport validate(const QPSystem& sys) {
    ValidationReport report;
    const std::size_t n = sys.variables.size();
    const std::size_t m = sys.B.rows();
    report.var_count = n;
    report.monomial_count = m;

    if (n == 0) {
        report.issues.push_back("system has no variables");
        return report;
    }
    {
        std::set<std::string> names(sys.variables.begin(), sys.variables.end());
        if (names.size() != n) {
            report.issues.push_back("variable names are not distinct");
            return report;
        }
    }
    if (m == 0) {
        report.issues.push_back("system has no quasimonomials (m must be at least 1)");
        return report;
    }
    if (sys.lambda.rows() != n || sys.lambda.cols() != 1) {
        report.issues.push_back("lambda must be a column of length n");
        return report;
    }
    if (sys.A.rows() != n || sys.A.cols() != m) {
        report.issues.push_back("coefficient matrix A must be n x m");
        return report;
    }
    if (sys.B.cols() != n) {
        report.issues.push_back("exponent matrix B must be m x n");
        return report;
    }
    if (sys.x0) {
        if (sys.x0->size() != n) {
            report.issues.push_back("initial state length must equal the variable count");
            return report;
        }
        for (double v : *sys.x0) {
            if (!(v > 0.0)) {
                report.issues.push_back("initial state components must be positive");
                return report;
            }
        }
    }

    bool merged = false;
    // Merge duplicate exponent rows by summing the matching A columns;
    // first occurrence keeps its position.
    std::vector<std::vector<Rational>> rows;
    std::vector<std::size_t> target(m);
    std::map<std::vector<Rational>, std::size_t> seen;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<Rational> row = sys.B.row(j);
        bool zero = std::all_of(row.begin(), row.end(),
                                [](const Rational& r) { return r.is_zero(); });
        if (zero) {
            report.issues.push_back("exponent row " + std::to_string(j) +
                                    " is zero: a constant term must live in lambda");
            return report;
        }
        auto [it, inserted] = seen.emplace(row, rows.size());
        if (inserted) {
            rows.push_back(std::move(row));
        } else {
            merged = true;
        }
        target[j] = it->second;
    }

    QPSystem normalized;
    normalized.variables = sys.variables;
    normalized.lambda = sys.lambda;
    normalized.x0 = sys.x0;
    normalized.B = RationalMatrix(rows.size(), n);
    for (std::size_t j = 0; j < rows.size(); ++j) {
        for (std::size_t k = 0; k < n; ++k) normalized.B(j, k) = rows[j][k];
    }
    normalized.A = RationalMatrix(n, rows.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            normalized.A(i, target[j]) += sys.A(i, j);
        }
    }
    if (merged) {
        report.issues.push_back("duplicate quasimonomial rows merged");
    }

    report.monomial_count = normalized.B.rows();
    report.rank = normalized.B.rank();
    report.valid = true;
    report.normalized = std::move(normalized);
    return report;
}

QPSystem require_valid(const QPSystem& sys) {
    ValidationReport report = validate(sys);
    if (!report.valid) {
        throw ValidationError("invalid system: " + report.issues.front());
    }
    return *std::move(report.normalized);
}

std::vector<Quasimonomial> qm_extract(const QPSystem& sys) {
    QPSystem clean = require_valid(sys);
    std::vector<Quasimonomial> out;
    out.reserve(clean.B.rows());
    for (std::size_t j = 0; j < clean.B.rows(); ++j) {
        out.push_back(Quasimonomial{clean.B.row(j)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> monomial_values(const RationalMatrix& exponents,
                                    const std::vector<double>& state) {
    if (state.size() != exponents.cols()) {
        throw ValidationError("state length does not match exponent matrix width");
    }
    std::vector<double> logs(state.size());
    for (std::size_t k = 0; k < state.size(); ++k) {
        if (!(state[k] > 0.0)) {
            throw DomainError("monomial map requires a positive state");
        }
        logs[k] = std::log(state[k]);
    }
    std::vector<double> out(exponents.rows());
    for (std::size_t j = 0; j < exponents.rows(); ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < state.size(); ++k) {
            const Rational& e = exponents(j, k);
            if (!e.is_zero()) acc += e.to_double() * logs[k];
        }
        out[j] = std::exp(acc);
    }
    return out;
}

QPSystem qm_transform(const QPSystem& sys, const RationalMatrix& C) {
    QPSystem clean = require_valid(sys);
    const std::size_t n = clean.var_count();
    if (C.rows() != n || C.cols() != n) {
        throw ValidationError("transformation matrix must be n x n");
    }
    RationalMatrix Cinv;
    try {
        Cinv = C.inverse();
    } catch (const ValidationError&) {
        throw ValidationError("transformation matrix is singular");
    }

    QPSystem out;
    out.variables = clean.variables;
    out.B = clean.B * C;
    out.A = Cinv * clean.A;
    out.lambda = Cinv * clean.lambda;
    if (clean.x0) {
        // x_i = prod_k xhat_k^C(i,k)  =>  xhat_k = prod_i x_i^(C^-1)(k,i)
        out.x0 = monomial_values(Cinv, *clean.x0);
    }
    return out;
}

LVSystem lv_embed(const QPSystem& sys) {
    QPSystem clean = require_valid(sys);
    LVSystem lv;
    lv.lambda_prime = clean.B * clean.lambda;
    lv.A_prime = clean.B * clean.A;
    lv.quasimonomials.reserve(clean.B.rows());
    for (std::size_t j = 0; j < clean.B.rows(); ++j) {
        lv.quasimonomials.push_back(Quasimonomial{clean.B.row(j)});
    }
    if (clean.x0) {
        lv.z0 = monomial_values(clean.B, *clean.x0);
    }
    return lv;
}

namespace {

// Searches for a bijection sigma between the rows of two systems under which
// the exact invariants B*lambda and B*A coincide:
//   L2[j] == L1[sigma(j)]  and  P2[j][k] == P1[sigma(j)][sigma(k)].
// `attempt` is called for each complete bijection; returning true stops the
// search. Returns whether any bijection was attempted.
bool for_each_invariant_matching(const RationalMatrix& P1, const RationalMatrix& L1,
                                 const RationalMatrix& P2, const RationalMatrix& L2,
                                 const std::function<bool(const std::vector<std::size_t>&)>& attempt,
                                 bool& accepted) {
    const std::size_t m = P1.rows();
    std::vector<std::size_t> sigma(m, m);
    std::vector<bool> used(m, false);
    bool found_any = false;
    accepted = false;

    std::function<bool(std::size_t)> place = [&](std::size_t j) -> bool {
        if (j == m) {
            found_any = true;
            if (attempt(sigma)) {
                accepted = true;
                return true;
            }
            return false;
        }
        for (std::size_t cand = 0; cand < m; ++cand) {
            if (used[cand]) continue;
            if (L2(j, 0) != L1(cand, 0)) continue;
            if (P2(j, j) != P1(cand, cand)) continue;
            bool ok = true;
            for (std::size_t k = 0; k < j && ok; ++k) {
                ok = P2(j, k) == P1(cand, sigma[k]) && P2(k, j) == P1(sigma[k], cand);
            }
            if (!ok) continue;
            sigma[j] = cand;
            used[cand] = true;
            if (place(j + 1)) return true;
            used[cand] = false;
        }
        return false;
    };
    place(0);
    return found_any;
}

} // namespace

BecVerdict check_bec(const QPSystem& sys1, const QPSystem& sys2) {
    QPSystem a = require_valid(sys1);
    QPSystem b = require_valid(sys2);

    BecVerdict verdict;
    if (a.var_count() != b.var_count()) {
        verdict.diagnostic = "variable counts differ";
        return verdict;
    }
    if (a.monomial_count() != b.monomial_count()) {
        verdict.diagnostic = "quasimonomial counts differ";
        return verdict;
    }
    const std::size_t n = a.var_count();

    const RationalMatrix P1 = a.B * a.A;
    const RationalMatrix L1 = a.B * a.lambda;
    const RationalMatrix P2 = b.B * b.A;
    const RationalMatrix L2 = b.B * b.lambda;

    const bool full_rank = b.B.rank() == n;

    // With full column rank the row matching determines C uniquely; try each
    // invariant-respecting matching until one is carried by an actual change
    // of variables.
    auto attempt = [&](const std::vector<std::size_t>& sigma) -> bool {
        if (!full_rank) {
            return true; // invariants agree; witness not recoverable
        }
        // Solve B2 * C = B1[sigma] using an independent row subset of B2.
        RationalMatrix B1s(a.B.rows(), n);
        for (std::size_t j = 0; j < a.B.rows(); ++j) {
            for (std::size_t k = 0; k < n; ++k) B1s(j, k) = a.B(sigma[j], k);
        }
        auto rows = b.B.independent_rows();
        RationalMatrix lhs(n, n), rhs(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                lhs(i, k) = b.B(rows[i], k);
                rhs(i, k) = B1s(rows[i], k);
            }
        }
        RationalMatrix C;
        try {
            C = lhs.solve(rhs);
        } catch (const ValidationError&) {
            return false;
        }
        if (b.B * C != B1s) return false;
        if (C.rank() != n) return false;
        RationalMatrix Cinv = C.inverse();
        if (Cinv * b.lambda != a.lambda) return false;
        RationalMatrix A2t = Cinv * b.A;
        // Column j of the transformed system corresponds to row j of B2,
        // which was matched to row sigma(j) of sys1.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < a.B.rows(); ++j) {
                if (A2t(i, j) != a.A(i, sigma[j])) return false;
            }
        }
        verdict.witness = std::move(C);
        return true;
    };

    bool accepted = false;
    bool matched = for_each_invariant_matching(P1, L1, P2, L2, attempt, accepted);
    if (!matched) {
        verdict.diagnostic = "invariant products B*A / B*lambda differ";
        return verdict;
    }
    if (!full_rank) {
        verdict.equivalent = true;
        verdict.diagnostic =
            "invariants agree; exponent matrix rank is deficient, witness not unique";
        return verdict;
    }
    if (!accepted) {
        verdict.diagnostic =
            "invariants agree but no quasimonomial change of variables connects the systems";
        return verdict;
    }
    verdict.equivalent = true;
    return verdict;
}

ExpandedMap expand_exponent_matrix(const QPSystem& sys) {
    QPSystem clean = require_valid(sys);
    const std::size_t n = clean.var_count();
    const std::size_t m = clean.monomial_count();
    if (clean.B.rank() != n) {
        throw ValidationError("exponent matrix rank must equal the variable count");
    }

    ExpandedMap out;
    out.B_full = clean.B;
    out.dummy_count = m - n;
    std::size_t rank = n;
    for (std::size_t i = 0; i < m && rank < m; ++i) {
        std::vector<Rational> unit(m);
        unit[i] = Rational(1);
        RationalMatrix candidate = out.B_full.with_appended_column(unit);
        if (candidate.rank() > rank) {
            out.B_full = std::move(candidate);
            ++rank;
        }
    }
    if (rank != m) {
        throw InternalError("failed to complete exponent matrix to full rank");
    }
    return out;
}

} // namespace lvnf
