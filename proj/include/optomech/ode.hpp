#pragma once

#include <array>
#include <functional>
#include <limits>
#include <stdexcept>
#include <Eigen/Dense>

namespace optomech {

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct OdeStatistics {
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evaluations = 0;
};

class StepSizeUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dormand-Prince 8(5,3) explicit Runge-Kutta integrator with 7th-order
/// dense output, after Hairer, Norsett and Wanner's DOP853. Integrates in
/// either time direction, one accepted step per call to step().
class Dop853 {
 public:
  Dop853(OdeRhs rhs, double t0, Eigen::VectorXd y0, double t_end, OdeOptions options = {});

  // Returns false once t_end has been reached. Throws StepSizeUnderflow.
  bool step();

  double t() const { return t_; }
  double t_previous() const { return t_old_; }
  const Eigen::VectorXd& y() const { return y_; }
  const OdeStatistics& statistics() const { return stats_; }
  bool finished() const { return finished_; }

  // Dense output on [t_previous(), t()] of the last accepted step.
  Eigen::VectorXd interpolate(double t) const;

 private:
  static constexpr int kStages = 12;
  static constexpr int kExtendedStages = 16;

  double initial_step();
  void eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out);
  void prepare_dense_output();

  OdeRhs rhs_;
  OdeOptions options_;
  double t_;
  double t_old_;
  double t_end_;
  double direction_;
  double h_abs_;
  Eigen::VectorXd y_;
  Eigen::VectorXd y_old_;
  Eigen::VectorXd f_;
  std::array<Eigen::VectorXd, kExtendedStages> k_;
  std::array<Eigen::VectorXd, 7> dense_;
  bool finished_ = false;
  OdeStatistics stats_;
};

}  // namespace optomech
