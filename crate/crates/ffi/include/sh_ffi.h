#ifndef SH_FFI_H
#define SH_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShActionKind {
  SH_ACTION_KIND_NOMINATE = 0,
  SH_ACTION_KIND_VOTE = 1,
  SH_ACTION_KIND_PRESIDENT_DISCARD = 2,
  SH_ACTION_KIND_CHANCELLOR_ENACT = 3,
  SH_ACTION_KIND_INVESTIGATE = 4,
  SH_ACTION_KIND_CHOOSE_SPECIAL_ELECTION = 5,
  SH_ACTION_KIND_ACKNOWLEDGE_PEEK = 6,
  SH_ACTION_KIND_EXECUTE = 7,
  SH_ACTION_KIND_PROPOSE_VETO = 8,
  SH_ACTION_KIND_VETO_DECISION = 9,
} ShActionKind;

typedef enum ShEndReason {
  SH_END_REASON_HITLER_ELECTED = 0,
  SH_END_REASON_SIX_FASCIST_POLICIES = 1,
  SH_END_REASON_FIVE_LIBERAL_POLICIES = 2,
  SH_END_REASON_HITLER_KILLED = 3,
} ShEndReason;

typedef enum ShParty {
  SH_PARTY_LIBERAL = 0,
  SH_PARTY_FASCIST = 1,
} ShParty;

typedef enum ShStatus {
  SH_STATUS_OK = 0,
  SH_STATUS_NULL_POINTER = 1,
  SH_STATUS_INVALID_ARGUMENT = 2,
  SH_STATUS_ILLEGAL_ACTION = 3,
  SH_STATUS_GAME_OVER = 4,
  SH_STATUS_OUT_OF_RANGE = 5,
  SH_STATUS_PANIC = 6,
} ShStatus;

// Opaque game handle.
typedef struct ShGame ShGame;

// An action as a kind plus one argument: a seat, a hand position, or
// 0/1 for votes and veto answers. Unused for the argument-free kinds.
typedef struct ShAction {
  enum ShActionKind kind;
  uint32_t arg;
} ShAction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *sh_last_error(void);

// Creates a game with default rules. The engine's randomness comes from
// `seed`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum ShStatus sh_game_new(uint32_t num_players, uint64_t seed, struct ShGame **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `game` must come from `sh_game_new` and not be used afterwards.
void sh_game_free(struct ShGame *game);

// The seat whose move it is.
//
// # Safety
// Pointers must be valid.
enum ShStatus sh_game_current_seat(const struct ShGame *game, uint32_t *out);

// Number of legal actions; zero once the game is over.
//
// # Safety
// Pointers must be valid.
enum ShStatus sh_game_legal_count(const struct ShGame *game, size_t *out);

// The `index`-th legal action, in the engine's stable order.
//
// # Safety
// Pointers must be valid.
enum ShStatus sh_game_legal_action(const struct ShGame *game, size_t index, struct ShAction *out);

// Applies an action. An illegal action leaves the game unchanged.
//
// # Safety
// `game` must be a valid handle.
enum ShStatus sh_game_apply(struct ShGame *game, struct ShAction action);

// # Safety
// Pointers must be valid.
enum ShStatus sh_game_is_over(const struct ShGame *game, bool *out);

// Winning team and reason of a finished game.
//
// # Safety
// Pointers must be valid.
enum ShStatus sh_game_outcome(const struct ShGame *game,
                              enum ShParty *winner,
                              enum ShEndReason *reason);

// Full state, hidden parts included, as canonical JSON.
//
// # Safety
// `game` must be a valid handle. Free the result with `sh_string_free`.
char *sh_game_to_json(const struct ShGame *game);

// What `seat` can see, as JSON.
//
// # Safety
// `game` must be a valid handle. Free the result with `sh_string_free`.
char *sh_game_observation_json(const struct ShGame *game, uint32_t seat);

// # Safety
// `s` must be null or a string returned by this library.
void sh_string_free(char *s);

// Asks an agent (`random`, `selfish`, `ismcts` or `ismcts:N:K`) for the
// current seat's move without applying it. The agent's randomness is
// derived from the game seed and a per-handle call counter, so a replayed
// sequence of calls gives the same answers.
//
// # Safety
// `game` must be a valid handle, `agent` a NUL-terminated string and `out`
// writable.
enum ShStatus sh_agent_choose(struct ShGame *game, const char *agent, struct ShAction *out);

// Number of distinct orderings of the 17-card deck by party.
uint64_t sh_count_distinct_decks(void);

// # Safety
// `out` must be writable.
enum ShStatus sh_count_role_assignments(uint32_t num_players, uint64_t *out);

// Role assignments times deck orderings for a table size.
//
// # Safety
// `out` must be writable.
enum ShStatus sh_count_hidden_states(uint32_t num_players, uint64_t *out);

// 95% normal-approximation interval for `wins` out of `total`.
//
// # Safety
// `low` and `high` must be writable.
enum ShStatus sh_confidence_interval(uint64_t wins, uint64_t total, double *low, double *high);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SH_FFI_H */
