#pragma once

#include <stdexcept>
#include <string>

namespace tripeval {

// Base of every error the toolkit throws. The category maps onto the CLI
// exit codes (1 usage, 2 data, 3 numeric).
class Error : public std::runtime_error {
public:
    enum class Category { Usage = 1, Data = 2, Numeric = 3 };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    Category category_;
};

// Invalid arguments, configuration or API misuse.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(Category::Usage, what) {}
};

// Malformed or inconsistent input data.
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(Category::Data, what) {}
};

// A numerical procedure failed (non-convergence, undefined quantity).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(Category::Numeric, what) {}
};

}  // namespace tripeval
