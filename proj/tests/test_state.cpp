#include "oracles.hpp"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

using namespace nt;

TEST_CASE("partial_trace: Bell state reduces to I/2") {
    Vector psi = Vector::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    DensityMatrix bell = pure_state(2, psi);
    DensityMatrix red = partial_trace(bell, {1});
    CHECK((red.mat - Matrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial_trace: product state factorizes") {
    std::mt19937_64 rng(21);
    DensityMatrix a = oracle::random_density(1, rng);
    DensityMatrix b = oracle::random_density(1, rng);
    DensityMatrix prod;
    prod.n_qubits = 2;
    prod.mat = kron(a.mat, b.mat);
    DensityMatrix red = partial_trace(prod, {1}); // trace the B factor
    CHECK((red.mat - a.mat).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("partial_trace: random 3-qubit state matches naive index-summation oracle") {
    std::mt19937_64 rng(22);
    DensityMatrix rho = oracle::random_density(3, rng);
    DensityMatrix red = partial_trace(rho, {0});
    // qubit 0 is the most significant bit of the 3-bit index
    Matrix ref = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ref(i, j) = rho.mat(i, j) + rho.mat(4 + i, 4 + j);
    CHECK((red.mat - ref).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(red.mat.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("partial_trace rejects bad indices") {
    DensityMatrix rho = maximally_mixed(2);
    CHECK_THROWS_AS(partial_trace(rho, {2}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, {0, 0}), std::invalid_argument);
}

TEST_CASE("partial_trace then tensoring with I/2 preserves trace") {
    std::mt19937_64 rng(23);
    DensityMatrix rho = oracle::random_density(3, rng);
    DensityMatrix red = partial_trace(rho, {1});
    Matrix lifted = kron(red.mat, Matrix::Identity(2, 2) * 0.5);
    CHECK(std::abs(lifted.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("von_neumann_entropy: pure state is 0, maximally mixed is n") {
    CHECK(von_neumann_entropy(basis_state(3)) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(von_neumann_entropy(maximally_mixed(3)) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("von_neumann_entropy: diag(3/4, 1/4)") {
    DensityMatrix rho;
    rho.n_qubits = 1;
    rho.mat = Matrix::Zero(2, 2);
    rho.mat(0, 0) = 0.75;
    rho.mat(1, 1) = 0.25;
    // -sum p log2 p = 2 - (3/4) log2 3
    double expected = 2.0 - 0.75 * std::log2(3.0);
    CHECK(von_neumann_entropy(rho) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.811278124459133).epsilon(1e-12));
}

TEST_CASE("relative_entropy: D(rho||rho) = 0") {
    std::mt19937_64 rng(24);
    DensityMatrix rho = oracle::random_density(2, rng);
    CHECK(relative_entropy(rho, rho) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("relative_entropy: D(|0><0| || I/2) = 1") {
    CHECK(relative_entropy(basis_state(1), maximally_mixed(1)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("relative_entropy to mixed equals n - S") {
    std::mt19937_64 rng(25);
    for (int n = 1; n <= 3; ++n) {
        DensityMatrix rho = oracle::random_density(n, rng);
        CHECK(relative_entropy(rho, maximally_mixed(n)) ==
              doctest::Approx(double(n) - von_neumann_entropy(rho)).epsilon(1e-9));
        CHECK(relative_entropy_to_mixed(rho) == doctest::Approx(double(n) - von_neumann_entropy(rho)).epsilon(1e-12));
    }
}

TEST_CASE("relative_entropy signals support violations as infinity") {
    DensityMatrix zero = basis_state(1, 0);
    DensityMatrix one = basis_state(1, 1);
    CHECK(std::isinf(relative_entropy(zero, one)));
}

TEST_CASE("Pinsker inequality on 100 random pairs") {
    std::mt19937_64 rng(26);
    for (int rep = 0; rep < 100; ++rep) {
        int n = 1 + int(rng() % 3);
        DensityMatrix rho = oracle::random_density(n, rng);
        DensityMatrix sigma = oracle::random_density(n, rng);
        double t1 = trace_norm(rho.mat - sigma.mat);
        CHECK(0.5 * t1 * t1 <= relative_entropy(rho, sigma) + 1e-9);
    }
}

TEST_CASE("Shearer consequence on random states up to n=4") {
    std::mt19937_64 rng(27);
    for (int n = 2; n <= 4; ++n)
        for (int rep = 0; rep < 10; ++rep) {
            DensityMatrix rho = oracle::random_density(n, rng);
            double s = von_neumann_entropy(rho);
            double local_sum = 0.0;
            for (int q = 0; q < n; ++q) local_sum += von_neumann_entropy(partial_trace(rho, {q}));
            CHECK(local_sum >= (n - 1) * s - 1e-9);
        }
}

TEST_CASE("haar_random_state: purity, determinism, fresh seeds differ") {
    DensityMatrix a = haar_random_state(3, 42);
    CHECK(std::abs((a.mat * a.mat).trace().real() - 1.0) < 1e-12);
    DensityMatrix b = haar_random_state(3, 42);
    CHECK((a.mat - b.mat).cwiseAbs().maxCoeff() == 0.0);
    DensityMatrix c = haar_random_state(3, 43);
    CHECK((a.mat - c.mat).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("haar_random_state: 1000-sample average concentrates on I/4") {
    Matrix avg = Matrix::Zero(4, 4);
    for (int s = 0; s < 1000; ++s) avg += haar_random_state(2, 1000 + s).mat;
    avg /= 1000.0;
    CHECK(trace_norm(avg - Matrix::Identity(4, 4) * 0.25) <= 0.05);
}

TEST_CASE("DensityMatrix::validate catches defects") {
    DensityMatrix rho = maximally_mixed(1);
    CHECK_NOTHROW(rho.validate());
    rho.mat(0, 0) = 0.7;
    CHECK_THROWS_AS(rho.validate(), std::invalid_argument);
}
