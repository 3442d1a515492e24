#ifndef FRACNB_ERRORS_HPP
#define FRACNB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracnb {

// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Series argument outside its region of convergence.
class convergence_domain_error : public domain_error {
public:
    using domain_error::domain_error;
};

// Parameter combination the library deliberately does not evaluate.
class unsupported_domain_error : public domain_error {
public:
    using domain_error::domain_error;
};

// Series failed to meet its stopping rule within max_terms.
class truncation_error : public std::runtime_error {
public:
    truncation_error(const std::string& what, int terms)
        : std::runtime_error(what), terms_(terms) {}
    int terms() const noexcept { return terms_; }

private:
    int terms_;
};

// Every available evaluation path was unreliable.
class evaluation_error : public std::runtime_error {
public:
    evaluation_error(const std::string& what, std::string diagnostics)
        : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
    const std::string& diagnostics() const noexcept { return diagnostics_; }

private:
    std::string diagnostics_;
};

class argument_order_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace fracnb

#endif
