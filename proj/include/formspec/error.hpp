#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "formspec/srcpos.hpp"

namespace formspec {

/// Base for every error the engine reports to callers.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(SrcPos pos, std::string msg)
        : Error(msg + " " + pos.str()), pos_(pos), msg_(std::move(msg)) {}
    const SrcPos& pos() const noexcept { return pos_; }
    const std::string& message() const noexcept { return msg_; }

private:
    SrcPos pos_;
    std::string msg_;
};

class TypeError : public Error {
public:
    TypeError(std::string name, SrcPos pos)
        : Error("cannot infer a type for '" + name + "' " + pos.str()), name_(std::move(name)), pos_(pos) {}
    const std::string& name() const noexcept { return name_; }
    const SrcPos& pos() const noexcept { return pos_; }

private:
    std::string name_;
    SrcPos pos_;
};

/// Raised by normalization for terms outside the arithmetic fragment.
class Unsupported : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    explicit NotFound(const std::string& what) : Error("not found: " + what) {}
};

class AuthoringError : public Error {
public:
    AuthoringError(std::string file, SrcPos pos, const std::string& msg)
        : Error(file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg),
          file_(std::move(file)), pos_(pos) {}
    const std::string& file() const noexcept { return file_; }
    const SrcPos& pos() const noexcept { return pos_; }

private:
    std::string file_;
    SrcPos pos_;
};

class InvalidTactic : public Error {
public:
    explicit InvalidTactic(const std::string& reason, std::vector<std::string> blockers = {})
        : Error(reason), blockers_(std::move(blockers)) {}
    const std::vector<std::string>& blockers() const noexcept { return blockers_; }

private:
    std::vector<std::string> blockers_;
};

class NoCasMatch : public Error {
public:
    explicit NoCasMatch(const std::string& raw) : Error("no CAS command matches: " + raw) {}
};

}  // namespace formspec
