#ifndef MEVC_PARTICIPANT_HPP
#define MEVC_PARTICIPANT_HPP

#include <compare>
#include <string>

namespace mevc {

// Either the distinguished adversary or a named honest participant.
class Participant {
 public:
  static Participant adversary() { return Participant{true, ""}; }
  static Participant honest(std::string name) { return Participant{false, std::move(name)}; }

  bool is_adv() const { return adv_; }
  const std::string& name() const { return name_; }

  auto operator<=>(const Participant&) const = default;

 private:
  Participant(bool adv, std::string name) : adv_(adv), name_(std::move(name)) {}

  bool adv_;
  std::string name_;
};

inline std::string participant_label(const Participant& p) {
  return p.is_adv() ? "Adv" : p.name();
}

}  // namespace mevc

#endif
