#pragma once

#include <any>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "brrkit/sexpr.hpp"

namespace brrkit {

enum class EntryCode { Enter, Skip };

/// The status object associated with a wormhole name.
struct WormholeStatus {
  EntryCode entry_code = EntryCode::Enter;
  std::any data;
};

/// Session-level state that a wormhole may change but must not leak.
using StateGlobals = std::map<std::string, SExpr>;

/// Named side-channel cells. The persistent status of each name lives here;
/// while a wormhole is open its ephemeral copy is the one read and written.
class WormholeStore {
 public:
  /// The current status: the ephemeral copy if the wormhole is open,
  /// otherwise the persistent one. Unknown names yield a fresh status.
  WormholeStatus get_persistent_whs(const std::string& name) const;

  /// Coherent setter: updates the ephemeral copy when open so that the
  /// value survives write-back, otherwise the persistent status.
  void set_persistent_whs(const std::string& name, WormholeStatus status);

  /// Replaces the persistent status with f(status). Never opens the wormhole.
  void wormhole_eval(const std::string& name, const std::function<WormholeStatus(WormholeStatus)>& f);

  /// Opens the wormhole and runs `first_form` on the ephemeral status. On
  /// every exit, including exceptions, the ephemeral status is written back
  /// and `globals` is restored to its value on entry. When the status's entry
  /// code is Skip, first_form is not run.
  void wormhole_enter(const std::string& name, StateGlobals& globals,
                      const std::function<void(WormholeStatus&)>& first_form);

  bool is_open(const std::string& name) const;

 private:
  struct Open {
    WormholeStatus status;
    bool dirty = false;
  };

  mutable std::mutex mu_;
  std::map<std::string, WormholeStatus> persistent_;
  std::map<std::string, Open> open_;
  std::map<std::string, bool> evaluating_;
};

}  // namespace brrkit
