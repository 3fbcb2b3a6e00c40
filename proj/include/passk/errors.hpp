// Error taxonomy shared across the toolkit. The CLI maps these onto
// distinct exit codes (see tools/passk.cpp).

#pragma once

#include <stdexcept>
#include <string>

namespace passk {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter outside its mathematical domain (e.g. a spread outside (0, 1/2)).
class domain_error : public error {
public:
    using error::error;
};

// Bad configuration: malformed config files, missing credentials, corpus
// files that do not match the schema.
class config_error : public error {
public:
    using error::error;
};

// A violation of the experiment protocol (e.g. an inconsistency test with a
// single variant, or a private-dataset build with incomplete variant runs).
class protocol_error : public error {
public:
    using error::error;
};

// Host-side failures that must never be charged to a candidate solution:
// missing interpreter, sandbox setup failure, backend transport breakdown.
class infrastructure_error : public error {
public:
    using error::error;
};

// An unbound placeholder at prompt render time.
class render_error : public error {
public:
    using error::error;
};

// Solver backend failures, annotated with what went wrong so callers can
// retry, abort, or re-authenticate.
class backend_error : public error {
public:
    enum class Kind { auth, rate_limited, transport, malformed_response };

    backend_error(Kind kind, const std::string& what) : error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

}  // namespace passk
