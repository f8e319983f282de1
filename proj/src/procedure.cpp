#include "onlinearc/procedure.hpp"

namespace oarc {

StepResult OnlineProcedure::step(double score) {
  validate_score(score, kind());
  state_.append(preprocess(score));
  std::vector<std::size_t> joined = advance();
  for (std::size_t i : joined) state_.reject(i);
  return {state_.time(), state_.k_star(), std::move(joined)};
}

}  // namespace oarc
