#pragma once

#include <stdexcept>
#include <string>

namespace asmf {

// Every error message is a single line so the CLI can print it verbatim.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class CriterionError : public Error {
public:
    using Error::Error;
};

class TreeError : public Error {
public:
    using Error::Error;
};

class ModelError : public Error {
public:
    using Error::Error;
};

}  // namespace asmf
