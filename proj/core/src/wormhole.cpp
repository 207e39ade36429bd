#include "brrkit/wormhole.hpp"

namespace brrkit {

WormholeStatus WormholeStore::get_persistent_whs(const std::string& name) const {
  std::lock_guard lock(mu_);
  if (auto it = open_.find(name); it != open_.end()) return it->second.status;
  if (auto it = persistent_.find(name); it != persistent_.end()) return it->second;
  return {};
}

void WormholeStore::set_persistent_whs(const std::string& name, WormholeStatus status) {
  std::lock_guard lock(mu_);
  if (auto it = open_.find(name); it != open_.end()) {
    it->second.status = std::move(status);
    it->second.dirty = true;
    return;
  }
  persistent_[name] = std::move(status);
}

void WormholeStore::wormhole_eval(const std::string& name,
                                  const std::function<WormholeStatus(WormholeStatus)>& f) {
  WormholeStatus current;
  {
    std::lock_guard lock(mu_);
    if (open_.contains(name)) throw Error("wormhole-eval on open wormhole " + name);
    if (evaluating_[name]) throw Error("reentrant wormhole-eval on " + name);
    evaluating_[name] = true;
    current = std::move(persistent_[name]);
  }
  WormholeStatus next;
  try {
    next = f(std::move(current));
  } catch (...) {
    std::lock_guard lock(mu_);
    evaluating_[name] = false;
    throw;
  }
  std::lock_guard lock(mu_);
  persistent_[name] = std::move(next);
  evaluating_[name] = false;
}

void WormholeStore::wormhole_enter(const std::string& name, StateGlobals& globals,
                                   const std::function<void(WormholeStatus&)>& first_form) {
  WormholeStatus* ephemeral = nullptr;
  {
    std::lock_guard lock(mu_);
    if (open_.contains(name)) throw Error("wormhole " + name + " is already open");
    auto it = persistent_.find(name);
    WormholeStatus start = it == persistent_.end() ? WormholeStatus{} : it->second;
    if (start.entry_code == EntryCode::Skip) return;
    ephemeral = &open_.emplace(name, Open{std::move(start), false}).first->second.status;
  }
  StateGlobals snapshot = globals;
  auto exit = [&] {
    globals = std::move(snapshot);
    std::lock_guard lock(mu_);
    auto it = open_.find(name);
    persistent_[name] = std::move(it->second.status);
    open_.erase(it);
  };
  try {
    first_form(*ephemeral);
  } catch (...) {
    exit();
    throw;
  }
  exit();
}

bool WormholeStore::is_open(const std::string& name) const {
  std::lock_guard lock(mu_);
  return open_.contains(name);
}

}  // namespace brrkit
