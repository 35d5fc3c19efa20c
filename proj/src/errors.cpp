#include "cam/errors.hpp"

#include <iostream>

namespace cam {

namespace {

void default_sink(const std::string& message) {
    std::cerr << "warning: " << message << "\n";
}

void (*g_sink)(const std::string&) = default_sink;

} // namespace

void warn(const std::string& message) {
    g_sink(message);
}

void set_warning_sink(void (*sink)(const std::string&)) {
    g_sink = sink != nullptr ? sink : default_sink;
}

} // namespace cam
