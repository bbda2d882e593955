#pragma once

// JSON building blocks shared by the report emitter and the CLI, so every
// output path spells hypotheses and statements the same way.

#include "conflev/model.hpp"
#include "json.hpp"

namespace conflev {

nlohmann::json hypothesis_json(const Hypothesis& h);
nlohmann::json statement_json(const ConfidenceStatement& st);

}  // namespace conflev
