// SPDX-License-Identifier: Apache-2.0
#ifndef ANCHOR_ERRORS_HPP
#define ANCHOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace anchor {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid system geometry or experiment configuration (e.g. P > L).
class config_error : public error {
public:
    using error::error;
};

/// A prior band touches the tan singularity at f = 0.5.
class band_error : public error {
public:
    using error::error;
};

/// Rejection sampling exhausted its attempt budget.
class sampling_error : public error {
public:
    using error::error;
};

/// Dimension mismatch between operands.
class shape_error : public error {
public:
    using error::error;
};

/// Conic solve did not reach an optimal point; carries solver diagnostics.
class solver_error : public error {
public:
    using error::error;
};

} // namespace anchor

#endif
