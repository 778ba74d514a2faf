#pragma once

#include "glancing/config.hpp"

#include <ostream>
#include <string>

namespace glancing {

// Each command writes its outputs under cfg.out_dir, prints a short summary to
// `log`, and returns an exit status: 0 on success, otherwise the ErrorKind
// code (2 config, 3 domain, 4 precision, 5 internal).
int cmd_airy_table(const RunConfig &cfg, std::ostream &log);
int cmd_green(const RunConfig &cfg, std::ostream &log);
int cmd_compare(const RunConfig &cfg, std::ostream &log);
int cmd_caustics(const RunConfig &cfg, std::ostream &log);
int cmd_decay(const RunConfig &cfg, std::ostream &log);
int cmd_phase(const RunConfig &cfg, std::ostream &log);

// Dispatch on cfg.command.
int run_command(const RunConfig &cfg, std::ostream &log);

} // namespace glancing
