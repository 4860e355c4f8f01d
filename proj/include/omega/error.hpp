#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omega {

/// Base class for every failure the pipeline reports.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hunk header arithmetic disagrees with its body, or the input is a
/// combined/merge diff.
class MalformedDiff : public Error {
public:
    MalformedDiff(std::string path, std::size_t offset, const std::string& what)
        : Error(what + " (file '" + path + "', byte offset " + std::to_string(offset) + ")"),
          path_(std::move(path)),
          offset_(offset) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::string path_;
    std::size_t offset_;
};

class ContextMismatch : public Error {
public:
    using Error::Error;
};

class MissingSource : public Error {
public:
    explicit MissingSource(std::string path)
        : Error("no source text provided for '" + path + "'"), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class TransportError : public Error {
public:
    using Error::Error;
};

class EndpointError : public Error {
public:
    EndpointError(int status, std::string body)
        : Error("endpoint returned HTTP " + std::to_string(status) + ": " + body),
          status_(status),
          body_(std::move(body)) {}
    int status() const noexcept { return status_; }
    const std::string& body() const noexcept { return body_; }

private:
    int status_;
    std::string body_;
};

class EmptyCompletion : public Error {
public:
    EmptyCompletion() : Error("completion contained no content") {}
};

/// Replay mode found no recorded response for a request.
class ReplayMismatch : public Error {
public:
    using Error::Error;
};

class UnrecognizedLabel : public Error {
public:
    using Error::Error;
};

class UnparseableSummary : public Error {
public:
    using Error::Error;
};

class MalformedMessage : public Error {
public:
    using Error::Error;
};

class ContextTooLarge : public Error {
public:
    using Error::Error;
};

class EmptyCorpus : public Error {
public:
    EmptyCorpus() : Error("corpus is empty") {}
};

class EmptyText : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace omega
