#include "qcat/random.hpp"

#include <Eigen/Dense>

namespace qcat {

namespace {

Eigen::MatrixXcd gaussian_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXcd g(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g(r, c) = Complex(dist(rng), dist(rng));
    return g;
}

ComplexTensor matrix_to_tensor(const Eigen::MatrixXcd& m) {
    const int d = static_cast<int>(m.rows());
    std::vector<Complex> amps(static_cast<std::size_t>(d) * static_cast<std::size_t>(m.cols()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            amps[static_cast<std::size_t>(r) * static_cast<std::size_t>(m.cols()) +
                 static_cast<std::size_t>(c)] = m(r, c);
    return ComplexTensor::from_matrix({d}, {static_cast<int>(m.cols())}, std::move(amps));
}

Eigen::MatrixXcd unitary_from_qr(Eigen::MatrixXcd g) {
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases so the distribution does not depend on the QR convention.
    for (int c = 0; c < q.cols(); ++c) {
        const Complex piv = r(c, c);
        if (std::abs(piv) > 0.0) q.col(c) *= piv / std::abs(piv);
    }
    return q;
}

}  // namespace

Complex random_complex_gaussian(Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return {dist(rng), dist(rng)};
}

ComplexTensor random_unitary(int d, Rng& rng) {
    return matrix_to_tensor(unitary_from_qr(gaussian_matrix(d, d, rng)));
}

ComplexTensor random_real_orthogonal(int d, Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = dist(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c)
        if (r(c, c) < 0.0) q.col(c) *= -1.0;
    return matrix_to_tensor(q.cast<Complex>());
}

ComplexTensor random_symmetric_unitary(int d, Rng& rng) {
    const Eigen::MatrixXcd v = unitary_from_qr(gaussian_matrix(d, d, rng));
    return matrix_to_tensor(v * v.transpose());
}

ComplexTensor random_operator(int d, Rng& rng) {
    return matrix_to_tensor(gaussian_matrix(d, d, rng));
}

ComplexTensor random_state_tensor(int d, Rng& rng) {
    std::vector<Complex> amps(static_cast<std::size_t>(d));
    double norm2 = 0.0;
    for (Complex& c : amps) {
        c = random_complex_gaussian(rng);
        norm2 += std::norm(c);
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (Complex& c : amps) c *= scale;
    return ComplexTensor({{LegDirection::output, d}}, std::move(amps));
}

ComplexTensor random_density(const std::vector<int>& dims, Rng& rng) {
    int total = 1;
    for (int d : dims) total *= d;
    const Eigen::MatrixXcd g = gaussian_matrix(total, total, rng);
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace();
    std::vector<Complex> amps(static_cast<std::size_t>(total) * total);
    for (int r = 0; r < total; ++r)
        for (int c = 0; c < total; ++c)
            amps[static_cast<std::size_t>(r) * total + c] = rho(r, c);
    std::vector<int> outs = dims, ins = dims;
    return ComplexTensor::from_matrix(std::move(outs), std::move(ins), std::move(amps));
}

}  // namespace qcat
