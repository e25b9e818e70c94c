#pragma once

// One-step product-formula unitaries, exact evolution, and the
// multiplicative Trotter error operator.

#include "noisytrotter/hamiltonian.hpp"
#include "noisytrotter/schedule.hpp"

#include <map>

namespace nt {

/// Builds step unitaries for one Hamiltonian, memoizing each group
/// exponential on (group, coeff*dt). r identical steps reuse the same
/// factors; use one builder per worker.
class StepUnitaryBuilder {
public:
    explicit StepUnitaryBuilder(const GroupedHamiltonian& h) : ham_(&h) {
        group_mats_.reserve(h.group_count());
        for (int g = 0; g < h.group_count(); ++g) group_mats_.push_back(h.group_matrix(g));
    }

    const Matrix& group_exponential(int g, double angle) {
        auto key = std::make_pair(g, angle);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        Matrix u = matrix_exp_hermitian(group_mats_.at(g), angle);
        return cache_.emplace(key, std::move(u)).first->second;
    }

    Matrix step_unitary(const Schedule& schedule, double dt) {
        Eigen::Index d = Eigen::Index(1) << ham_->n_qubits;
        Matrix u = Matrix::Identity(d, d);
        for (const auto& e : schedule.entries) {
            if (e.group < 0 || e.group >= ham_->group_count())
                throw std::invalid_argument("step_unitary: schedule group index out of range");
            u = u * group_exponential(e.group, e.coeff * dt);
        }
        return u;
    }

private:
    const GroupedHamiltonian* ham_;
    std::vector<Matrix> group_mats_;
    std::map<std::pair<int, double>, Matrix> cache_;
};

/// PF_p(dt) as an explicit unitary.
inline Matrix step_unitary(const GroupedHamiltonian& h, const Schedule& schedule, double dt) {
    StepUnitaryBuilder b(h);
    return b.step_unitary(schedule, dt);
}

/// exp(-i H t) via Hermitian eigendecomposition of the assembled matrix.
inline Matrix exact_unitary(const GroupedHamiltonian& h, double t) {
    if (h.n_qubits > kMaxDenseQubits)
        throw std::invalid_argument("exact_unitary: n > " + std::to_string(kMaxDenseQubits));
    return matrix_exp_hermitian(h.to_matrix(), t);
}

/// M_p = U^dag PF - I, so that PF = U (I + M_p). By unitary invariance,
/// ||M_p||_inf = ||PF - U||_inf.
inline Matrix multiplicative_error_operator(const Matrix& exact, const Matrix& pf) {
    if (exact.rows() != pf.rows() || exact.cols() != pf.cols())
        throw std::invalid_argument("multiplicative_error_operator: dimension mismatch");
    return exact.adjoint() * pf - Matrix::Identity(exact.rows(), exact.cols());
}

} // namespace nt
