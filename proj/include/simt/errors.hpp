#pragma once

#include <stdexcept>
#include <string>

namespace simt {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class EmptyInputError : public Error {
public:
  using Error::Error;
};

class MalformedTokenError : public Error {
public:
  using Error::Error;
};

class IndexError : public Error {
public:
  using Error::Error;
};

class InvalidParameterError : public Error {
public:
  using Error::Error;
};

class InvalidScheduleError : public Error {
public:
  using Error::Error;
};

class InvalidTraceError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class BoundaryError : public Error {
public:
  using Error::Error;
};

class VocabularyAlignmentError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class OracleRunawayError : public Error {
public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
public:
  using Error::Error;
};

}  // namespace simt
