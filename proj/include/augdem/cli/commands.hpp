#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "augdem/cli/config.hpp"

namespace augdem::cli {

// Entry point behind tools/main.cpp; also called directly by tests.
// Exit codes: 0 success, 1 validation/usage error, 2 backend failure.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

int cmd_ingest(const RunConfig& config, std::ostream& out);
int cmd_winrates(const RunConfig& config, std::ostream& out);
int cmd_adequacy(const RunConfig& config, std::ostream& out);
int cmd_accuracy(const RunConfig& config, std::ostream& out);
int cmd_bias(const RunConfig& config, std::ostream& out);
int cmd_augment_eval(const RunConfig& config, std::ostream& out);
int cmd_export_finetune(const RunConfig& config, std::ostream& out);
int cmd_synth(const RunConfig& config, std::ostream& out);

}  // namespace augdem::cli
