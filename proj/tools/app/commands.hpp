#ifndef STATCUT_APP_COMMANDS_HPP
#define STATCUT_APP_COMMANDS_HPP

#include <iosfwd>

#include "app/config.hpp"

namespace statcut::app {

/// Each command reports progress on `out`, problems on `err`, and returns an ExitCode.
int cmd_segment(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_fixtures(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Maps library and configuration exceptions to exit codes, printing the message.
int exit_code_for(const std::exception& e, std::ostream& err);

}  // namespace statcut::app

#endif  // STATCUT_APP_COMMANDS_HPP
