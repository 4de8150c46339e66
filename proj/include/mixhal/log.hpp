#pragma once

#include <string>

namespace mixhal::log {

void info(const std::string& message);
void warn(const std::string& message);
void error(const std::string& message);

// Silences info/warn output (errors still print). Used by tests and --quiet.
void set_quiet(bool quiet);

}  // namespace mixhal::log
