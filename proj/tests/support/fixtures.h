#ifndef DAYCARE_TESTS_FIXTURES_H_
#define DAYCARE_TESTS_FIXTURES_H_

#include <string>

#include "daycare/io.h"
#include "daycare/model.h"
#include "daycare/validate.h"

namespace daycare::testing {

inline std::string FixturePath(const std::string& name) {
  return std::string(DAYCARE_FIXTURES_DIR) + "/" + name;
}

inline std::string FixtureText(const std::string& name) {
  return ReadFile(FixturePath(name));
}

inline Instance LoadInstance(const std::string& name) {
  return ValidateOrThrow(ParseInstance(FixtureText(name)));
}

inline Matching LoadMatching(const std::string& name,
                             const Instance& instance) {
  return ReadMatching(FixtureText(name), instance).matching;
}

}  // namespace daycare::testing

#endif  // DAYCARE_TESTS_FIXTURES_H_
