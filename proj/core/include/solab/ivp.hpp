#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace solab::numerics {

using State = std::vector<double>;

// dydt must be filled in place; it arrives sized like y.
using VectorField =
    std::function<void(double t, const State& y, State& dydt)>;

struct Monitor {
  std::string id;
  std::function<double(double t, const State& y)> residual;
};

// Integration stops at the first accepted step across which g changes sign;
// the crossing is located on the dense output.
struct StopEvent {
  std::string id;
  std::function<double(double t, const State& y)> g;
};

struct IvpSolver {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double max_step = std::numeric_limits<double>::infinity();
  // Extra interpolated samples are emitted so that consecutive samples are at
  // most this far apart. Infinity keeps accepted steps only.
  double dense_stride = std::numeric_limits<double>::infinity();
  double min_step = 1e-14;
  double initial_step = 0;  // 0 selects the step automatically
  long max_steps = 2'000'000;
};

enum class Termination { reached_end, event, step_underflow, non_finite, max_steps };

const char* to_string(Termination t);

struct Sample {
  double t;
  State y;
};

struct MonitorRecord {
  double t;
  std::size_t monitor;  // index into Trajectory::monitor_ids
  double residual;
};

class Trajectory {
 public:
  // Samples are ordered in the direction of integration, so t is strictly
  // increasing for forward runs and strictly decreasing for backward runs.
  std::vector<Sample> samples;
  std::vector<std::string> monitor_ids;
  std::vector<MonitorRecord> monitor_log;
  Termination termination = Termination::reached_end;
  std::string event_id;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long evaluations = 0;

  double direction() const;
  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
  const State& final_state() const { return samples.back().y; }

  // Continuous extension of the accepted steps (fourth order).
  State interpolate(double t) const;
  State interpolate_derivative(double t) const;

  // Largest logged residual per monitor id (0 when nothing was logged).
  double max_residual(const std::string& id) const;
  double max_residual() const;

  struct Segment {
    double t0, h;
    std::vector<State> coeffs;  // five coefficient vectors
  };
  const std::vector<Segment>& segments() const { return segments_; }
  void add_segment(Segment s) { segments_.push_back(std::move(s)); }

 private:
  const Segment& locate(double t) const;
  std::vector<Segment> segments_;
};

// Dormand-Prince 5(4) with PI step-size control and free dense output.
// Non-finite derivatives and step-size underflow terminate the run; the last
// good state is the final sample and the reason is recorded in termination.
Trajectory solve_ivp(const VectorField& field, const State& y0, double t0,
                     double t1, const IvpSolver& s = {},
                     const std::vector<Monitor>& monitors = {},
                     const std::vector<StopEvent>& events = {});

}  // namespace solab::numerics
