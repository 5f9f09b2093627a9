/* Plays one game through the C interface, with the selfish agent in every
 * seat, and prints the result. */
#include <stdio.h>

#include "sh_ffi.h"

int main(int argc, char **argv) {
    unsigned players = argc > 1 ? (unsigned)atoi(argv[1]) : 7;
    uint64_t seed = argc > 2 ? (uint64_t)atoll(argv[2]) : 1;
    ShGame *game = NULL;
    if (sh_game_new(players, seed, &game) != SH_STATUS_OK) {
        fprintf(stderr, "new: %s\n", sh_last_error());
        return 1;
    }
    bool over = false;
    int moves = 0;
    while (sh_game_is_over(game, &over) == SH_STATUS_OK && !over) {
        ShAction action;
        if (sh_agent_choose(game, "selfish", &action) != SH_STATUS_OK ||
            sh_game_apply(game, action) != SH_STATUS_OK) {
            fprintf(stderr, "move: %s\n", sh_last_error());
            sh_game_free(game);
            return 1;
        }
        moves++;
    }
    ShParty winner;
    ShEndReason reason;
    sh_game_outcome(game, &winner, &reason);
    printf("moves=%d winner=%d reason=%d\n", moves, (int)winner, (int)reason);
    sh_game_free(game);
    return 0;
}
