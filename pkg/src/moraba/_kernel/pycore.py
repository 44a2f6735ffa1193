"""Pure-Python search core; the compiled twin mirrors this file.

The core works on a flat mutable position (ints instead of enums) and
encodes moves as small integers so move generation, make/unmake and
alpha-beta search stay allocation-light. Move ints sort exactly like
the text notation of the moves they encode, which pins down the
tie-break: search returns the first move achieving the best value in
ascending move-int order.

Move encoding: ``kind * 4096 + order(point) * 64 + order(dest or a1)``
with kind 0 = capture, 1 = place, 2 = slide, and ``order`` the point's
column-major rank in the 7x7 drawing.
"""

from __future__ import annotations

WIN_VALUE = 1_000_000.0
INFINITY = float("inf")

KIND_CAPTURE = 0
KIND_PLACE = 1
KIND_SLIDE = 2

MAX_DEPTH = 64  # recursion guard; each depth step is at most two applies


def encode_move(kind: int, a_order: int, b_order: int = 0) -> int:
    return kind * 4096 + a_order * 64 + b_order


class Core:
    """Mutable position plus search. One instance serves one search at
    a time; it is not thread-safe."""

    def __init__(self, point_count, adjacency, mills, order):
        self.n = point_count
        self.order = list(order)
        self.point_of_order = {order[p]: p for p in range(point_count)}
        self.by_order = sorted(range(point_count), key=lambda p: order[p])
        self.adjacency = [list(adjacency[p]) for p in range(point_count)]
        self.mills = [tuple(m) for m in mills]
        self.mills_at = [[i for i, m in enumerate(self.mills) if p in m] for p in range(point_count)]
        # Position slots; 0 empty, 1 attacker, 2 defender on the board.
        self.board = [0] * point_count
        self.hands = [0, 0]
        self.captured = [0, 0]
        self.on_board = [0, 0]
        self.to_move = 0
        self.pending = False
        self._undo: list[tuple[int, int, bool]] = []

    def set_state(self, board, hands, captured, to_move, pending) -> None:
        self.board = list(board)
        self.hands = list(hands)
        self.captured = list(captured)
        self.on_board = [self.board.count(1), self.board.count(2)]
        self.to_move = to_move
        self.pending = bool(pending)
        self._undo.clear()

    def snapshot(self) -> tuple:
        return (
            tuple(self.board),
            tuple(self.hands),
            tuple(self.captured),
            self.to_move,
            self.pending,
        )

    def _capture_targets(self) -> list[int]:
        opp = 1 - self.to_move
        piece = opp + 1
        board = self.board
        targets = [p for p in self.by_order if board[p] == piece]
        if self.hands[opp] + self.on_board[opp] <= 3:
            return targets
        protected = set()
        for a, b, c in self.mills:
            if board[a] == piece and board[b] == piece and board[c] == piece:
                protected.update((a, b, c))
        free = [p for p in targets if p not in protected]
        return free if free else targets

    def gen_moves(self) -> list[int]:
        """Legal move ints in ascending order; empty means immobilized."""
        board = self.board
        order = self.order
        if self.pending:
            return [encode_move(KIND_CAPTURE, order[p]) for p in self._capture_targets()]
        mover = self.to_move
        if self.hands[mover] > 0:
            return [encode_move(KIND_PLACE, order[p]) for p in self.by_order if board[p] == 0]
        piece = mover + 1
        moves = []
        for p in self.by_order:
            if board[p] != piece:
                continue
            for q in self.adjacency[p]:
                if board[q] == 0:
                    moves.append(encode_move(KIND_SLIDE, order[p], order[q]))
        return moves

    def _mill_at(self, point: int, piece: int) -> bool:
        board = self.board
        for i in self.mills_at[point]:
            a, b, c = self.mills[i]
            if board[a] == piece and board[b] == piece and board[c] == piece:
                return True
        return False

    def apply(self, move: int) -> None:
        self._undo.append((move, self.to_move, self.pending))
        kind = move >> 12
        a = self.point_of_order[(move >> 6) & 63]
        mover = self.to_move
        opp = 1 - mover
        if kind == KIND_CAPTURE:
            self.board[a] = 0
            self.on_board[opp] -= 1
            self.captured[opp] += 1
            self.to_move = opp
            self.pending = False
            return
        if kind == KIND_PLACE:
            self.board[a] = mover + 1
            self.hands[mover] -= 1
            self.on_board[mover] += 1
            landed = a
        else:
            b = self.point_of_order[move & 63]
            self.board[a] = 0
            self.board[b] = mover + 1
            landed = b
        # A completed mill earns a capture, provided there is anything to take.
        if self._mill_at(landed, mover + 1) and self.on_board[opp] > 0:
            self.pending = True
        else:
            self.pending = False
            self.to_move = opp

    def undo(self) -> None:
        move, prev_to_move, prev_pending = self._undo.pop()
        kind = move >> 12
        a = self.point_of_order[(move >> 6) & 63]
        mover = prev_to_move
        opp = 1 - mover
        if kind == KIND_CAPTURE:
            self.board[a] = opp + 1
            self.on_board[opp] += 1
            self.captured[opp] -= 1
        elif kind == KIND_PLACE:
            self.board[a] = 0
            self.hands[mover] += 1
            self.on_board[mover] -= 1
        else:
            b = self.point_of_order[move & 63]
            self.board[b] = 0
            self.board[a] = mover + 1
        self.to_move = prev_to_move
        self.pending = prev_pending

    def evaluate(self, root: int, w1: float, w2: float, w3: float) -> float:
        """Material, mobility and open-two-in-line terms, attacker minus
        defender, signed for ``root``."""
        board = self.board
        material = (self.hands[0] + self.on_board[0]) - (self.hands[1] + self.on_board[1])
        mobility = 0
        for p in range(self.n):
            piece = board[p]
            if piece == 0:
                continue
            free = 0
            for q in self.adjacency[p]:
                if board[q] == 0:
                    free += 1
            mobility += free if piece == 1 else -free
        potential = 0
        for a, b, c in self.mills:
            attackers = (board[a] == 1) + (board[b] == 1) + (board[c] == 1)
            defenders = (board[a] == 2) + (board[b] == 2) + (board[c] == 2)
            if attackers == 2 and defenders == 0:
                potential += 1
            elif defenders == 2 and attackers == 0:
                potential -= 1
        value = w1 * material + w2 * mobility + w3 * potential
        return value if root == 0 else -value

    def _terminal_value(self, depth: int, root: int, moves: list[int]) -> float | None:
        if self.hands[0] + self.on_board[0] < 3:
            winner = 1
        elif self.hands[1] + self.on_board[1] < 3:
            winner = 0
        elif not moves:
            winner = 1 - self.to_move
        else:
            return None
        value = WIN_VALUE + depth
        return value if winner == root else -value

    def _value(self, depth: int, alpha: float, beta: float, root: int, w1, w2, w3) -> float:
        moves = self.gen_moves()
        over = self._terminal_value(depth, root, moves)
        if over is not None:
            return over
        if depth == 0:
            return self.evaluate(root, w1, w2, w3)
        mover = self.to_move
        if mover == root:
            best = -INFINITY
            for move in moves:
                self.apply(move)
                child_depth = depth if self.to_move == mover else depth - 1
                value = self._value(child_depth, alpha, beta, root, w1, w2, w3)
                self.undo()
                if value > best:
                    best = value
                    if best > alpha:
                        alpha = best
                if alpha >= beta:
                    break
            return best
        best = INFINITY
        for move in moves:
            self.apply(move)
            child_depth = depth if self.to_move == mover else depth - 1
            value = self._value(child_depth, alpha, beta, root, w1, w2, w3)
            self.undo()
            if value < best:
                best = value
                if best < beta:
                    beta = best
            if alpha >= beta:
                break
        return best

    def search(self, depth: int, w1: float, w2: float, w3: float) -> tuple[float, int]:
        """Best value and move for the side to move; ties go to the
        lowest move int. Raises on terminal positions."""
        if not 1 <= depth <= MAX_DEPTH:
            raise ValueError(f"depth must be in 1..{MAX_DEPTH}")
        moves = self.gen_moves()
        if self._terminal_value(depth, self.to_move, moves) is not None:
            raise ValueError("search called on a terminal position")
        root = self.to_move
        best = -INFINITY
        best_move = -1
        alpha = -INFINITY
        for move in moves:
            self.apply(move)
            child_depth = depth if self.to_move == root else depth - 1
            value = self._value(child_depth, alpha, INFINITY, root, w1, w2, w3)
            self.undo()
            # Tight windows keep child values exact whenever they beat alpha,
            # so the strict test still finds the first maximal move.
            if value > best:
                best = value
                best_move = move
                if best > alpha:
                    alpha = best
        return best, best_move


def backend_name() -> str:
    return "python"
