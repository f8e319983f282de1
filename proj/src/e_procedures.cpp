#include "onlinearc/e_procedures.hpp"

#include <sstream>

#include "onlinearc/errors.hpp"

namespace oarc {

DeadlineSchedule DeadlineSchedule::none() { return {}; }

DeadlineSchedule DeadlineSchedule::immediate() { return fixed_lag(0); }

DeadlineSchedule DeadlineSchedule::fixed_lag(std::size_t lag) {
  DeadlineSchedule d;
  d.form_ = Form::Lag;
  d.lag_ = lag;
  return d;
}

DeadlineSchedule DeadlineSchedule::explicit_list(std::vector<std::size_t> deadlines) {
  for (std::size_t t = 1; t <= deadlines.size(); ++t) {
    if (deadlines[t - 1] < t) {
      std::ostringstream os;
      os << "deadline d_" << t << " = " << deadlines[t - 1] << " precedes t";
      throw ConfigError(os.str());
    }
  }
  DeadlineSchedule d;
  d.form_ = Form::Explicit;
  d.list_ = std::move(deadlines);
  return d;
}

std::size_t DeadlineSchedule::operator()(std::size_t t) const {
  switch (form_) {
    case Form::None:
      return kInfinite;
    case Form::Lag:
      return lag_ >= kInfinite - t ? kInfinite : t + lag_;
    case Form::Explicit:
      return t <= list_.size() ? list_[t - 1] : kInfinite;
  }
  return kInfinite;
}

std::string DeadlineSchedule::describe() const {
  switch (form_) {
    case Form::None:
      return "none";
    case Form::Lag:
      return "lag:" + std::to_string(lag_);
    case Form::Explicit:
      return "explicit[" + std::to_string(list_.size()) + "]";
  }
  return "";
}

OnlineEbh::OnlineEbh(WeightSequence weights, double alpha)
    : OnlineProcedure(std::move(weights), alpha) {}

std::vector<std::size_t> OnlineEbh::advance() {
  const std::size_t t = state_.time();
  auto joined = ladder_.push(e_level(state_.score(t), state_.alpha(), state_.gamma(t)));
  state_.set_k_star(ladder_.k_star());
  return joined;
}

ELond::ELond(WeightSequence weights, double alpha) : OnlineProcedure(std::move(weights), alpha) {}

std::vector<std::size_t> ELond::advance() {
  const std::size_t t = state_.time();
  const double level = static_cast<double>(state_.num_rejected() + 1);
  if (e_passes(state_.score(t), level, state_.alpha(), state_.gamma(t))) {
    state_.set_k_star(state_.num_rejected() + 1);
    return {t};
  }
  return {};
}

ETOAD::ETOAD(WeightSequence weights, double alpha, DeadlineSchedule deadlines)
    : OnlineProcedure(std::move(weights), alpha), deadlines_(std::move(deadlines)) {}

std::vector<std::size_t> ETOAD::advance() {
  const std::size_t t = state_.time();
  auto joined = ladder_.push(e_level(state_.score(t), state_.alpha(), state_.gamma(t)), deadlines_(t));
  state_.set_k_star(ladder_.k_star());
  return joined;
}

}  // namespace oarc
