#include "pdafusion/errors.hpp"

#include <sstream>

namespace pdaf {
namespace {

std::string join_violations(const std::vector<std::string>& violations) {
    std::ostringstream out;
    out << "validation failed";
    for (const auto& v : violations) {
        out << "\n  " << v;
    }
    return out.str();
}

std::string format_parse(const std::string& message, std::size_t line, std::size_t column) {
    std::ostringstream out;
    out << "parse error at line " << line << ", column " << column << ": " << message;
    return out.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

ValidationError::ValidationError(const std::string& field, const std::string& message)
    : ValidationError(std::vector<std::string>{field + ": " + message}) {}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(format_parse(message, line, column)), line_(line), column_(column) {}

IoError::IoError(const std::string& path, const std::string& message)
    : Error(path + ": " + message), path_(path) {}

}  // namespace pdaf
