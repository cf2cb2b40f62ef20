#pragma once

#include <sys/wait.h>

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "plank/bounds.hpp"
#include "plank/geometry.hpp"
#include "plank/witness.hpp"

namespace testsup {

inline Eigen::MatrixXd random_unit_rows(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd rows(n, d);
  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    do {
      for (int j = 0; j < d; ++j) rows(k, j) = gauss(rng);
      norm = rows.row(k).norm();
    } while (norm < 1e-8);
    rows.row(k) /= norm;
  }
  return rows;
}

inline plank::UnitVectorSet random_set(int n, int d, std::uint64_t seed) {
  return plank::UnitVectorSet::from_rows(random_unit_rows(n, d, seed));
}

// d = n Gaussian rows are invertible in practice; retry on the rare near-tie.
inline plank::UnitVectorSet random_invertible_set(int n, std::uint64_t seed) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    plank::UnitVectorSet vs = random_set(n, n, seed + 100000u * attempt);
    if (plank::gram(vs).invertible(1e-8)) return vs;
  }
  throw std::runtime_error("no invertible gram after 64 attempts");
}

// Symmetric PD matrix with unit row sums whose k-th diagonal entry sits
// `excess` above csc^2(pi/2n)/n: (1/n) 1 1^T + beta u u^T + delta P with
// u = (n e_k - 1)/|n e_k - 1| and P the projector onto {1, u}^perp.  The
// projector has P_kk = 0, so beta = (m_kk - 1/n) n/(n-1) exactly.
inline plank::ConjugatedMatrix bumped_matrix(int n, int k, double excess, double delta) {
  Eigen::VectorXd u = -Eigen::VectorXd::Ones(n);
  u[k] += n;
  u /= u.norm();
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n) / n;
  const Eigen::MatrixXd uu = u * u.transpose();
  const double target = plank::conjugated_diag_bound(n) + excess;
  const double beta = (target - 1.0 / n) * n / (n - 1);
  Eigen::MatrixXd m = ones + beta * uu;
  if (n > 2) m += delta * (Eigen::MatrixXd::Identity(n, n) - ones - uu);
  return plank::ConjugatedMatrix::from_entries(std::move(m));
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

// Runs a shell command, capturing stdout (add "2>&1" to fold in stderr).
inline CliResult run_cli(const std::string& command) {
  CliResult r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed: " + command);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace testsup
