# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled search core; mirrors pycore.py decision for decision.

Same move encoding, same evaluation arithmetic, same ascending-move
iteration order, so both backends return bit-identical values and pick
identical moves. Keep the two files in sync; the parity tests compare
them on random positions.
"""

from libc.math cimport INFINITY

cdef double WIN_VALUE = 1000000.0

cdef enum:
    KIND_CAPTURE = 0
    KIND_PLACE = 1
    KIND_SLIDE = 2

    MAXP = 32        # board points
    MAXM = 40        # mill lines
    MAXADJ = 8       # neighbours per point
    MAXMILLAT = 8    # mills through a point
    MAXMOVES = 64    # legal moves per node
    MAXLEVELS = 160  # applies per search: at most 2*depth + 1
    MAXUNDO = 192

MAX_DEPTH = 64


cdef inline int encode_move(int kind, int a_order, int b_order) nogil:
    return kind * 4096 + a_order * 64 + b_order


cdef class Core:
    """Mutable position plus search. One instance serves one search at
    a time; it is not thread-safe."""

    cdef int n
    cdef int order_[MAXP]
    cdef int point_of_order_[64]
    cdef int by_order_[MAXP]
    cdef int adj_count[MAXP]
    cdef int adj_[MAXP][MAXADJ]
    cdef int mill_count
    cdef int mills_[MAXM][3]
    cdef int mills_at_count[MAXP]
    cdef int mills_at_[MAXP][MAXMILLAT]

    cdef int board_[MAXP]
    cdef int hands_[2]
    cdef int captured_[2]
    cdef int on_board_[2]
    cdef int to_move_
    cdef bint pending_

    cdef int undo_move[MAXUNDO]
    cdef int undo_tm[MAXUNDO]
    cdef int undo_pd[MAXUNDO]
    cdef int undo_top
    cdef int moves_buf[MAXLEVELS * MAXMOVES]

    def __init__(self, point_count, adjacency, mills, order):
        cdef int p, i, k
        if point_count > MAXP:
            raise ValueError("too many board points for the compiled core")
        if len(mills) > MAXM:
            raise ValueError("too many mill lines for the compiled core")
        self.n = point_count
        for i in range(64):
            self.point_of_order_[i] = -1
        for p in range(point_count):
            self.order_[p] = order[p]
            self.point_of_order_[order[p]] = p
            if len(adjacency[p]) > MAXADJ:
                raise ValueError("too many neighbours for the compiled core")
            self.adj_count[p] = len(adjacency[p])
            for i in range(len(adjacency[p])):
                self.adj_[p][i] = adjacency[p][i]
        for p, i in enumerate(sorted(range(point_count), key=lambda q: order[q])):
            self.by_order_[p] = i
        self.mill_count = len(mills)
        for i in range(len(mills)):
            for k in range(3):
                self.mills_[i][k] = mills[i][k]
        for p in range(point_count):
            self.mills_at_count[p] = 0
        for i in range(self.mill_count):
            for k in range(3):
                p = self.mills_[i][k]
                if self.mills_at_count[p] >= MAXMILLAT:
                    raise ValueError("too many mills through a point for the compiled core")
                self.mills_at_[p][self.mills_at_count[p]] = i
                self.mills_at_count[p] += 1
        self.undo_top = 0
        self.to_move_ = 0
        self.pending_ = False
        for p in range(point_count):
            self.board_[p] = 0
        self.hands_[0] = self.hands_[1] = 0
        self.captured_[0] = self.captured_[1] = 0
        self.on_board_[0] = self.on_board_[1] = 0

    def set_state(self, board, hands, captured, to_move, pending):
        cdef int p
        self.on_board_[0] = 0
        self.on_board_[1] = 0
        for p in range(self.n):
            self.board_[p] = board[p]
            if board[p] == 1:
                self.on_board_[0] += 1
            elif board[p] == 2:
                self.on_board_[1] += 1
        self.hands_[0] = hands[0]
        self.hands_[1] = hands[1]
        self.captured_[0] = captured[0]
        self.captured_[1] = captured[1]
        self.to_move_ = to_move
        self.pending_ = bool(pending)
        self.undo_top = 0

    def snapshot(self):
        cdef int p
        board = []
        for p in range(self.n):
            board.append(self.board_[p])
        return (
            tuple(board),
            (self.hands_[0], self.hands_[1]),
            (self.captured_[0], self.captured_[1]),
            self.to_move_,
            bool(self.pending_),
        )

    cdef bint _mill_at(self, int point, int piece) nogil:
        cdef int i, m, a, b, c
        for i in range(self.mills_at_count[point]):
            m = self.mills_at_[point][i]
            a = self.mills_[m][0]
            b = self.mills_[m][1]
            c = self.mills_[m][2]
            if self.board_[a] == piece and self.board_[b] == piece and self.board_[c] == piece:
                return True
        return False

    cdef int _gen_moves(self, int level) nogil:
        """Fill this level's slice of the move buffer; returns the count.
        Emission follows ascending move-int order."""
        cdef int* out = &self.moves_buf[level * MAXMOVES]
        cdef int count = 0
        cdef int mover = self.to_move_
        cdef int opp = 1 - mover
        cdef int piece, i, j, p, q, m, a, b, c
        cdef bint protected_[MAXP]
        cdef bint any_free
        if self.pending_:
            piece = opp + 1
            if self.hands_[opp] + self.on_board_[opp] <= 3:
                for i in range(self.n):
                    p = self.by_order_[i]
                    if self.board_[p] == piece:
                        out[count] = encode_move(KIND_CAPTURE, self.order_[p], 0)
                        count += 1
                return count
            for p in range(self.n):
                protected_[p] = False
            for m in range(self.mill_count):
                a = self.mills_[m][0]
                b = self.mills_[m][1]
                c = self.mills_[m][2]
                if self.board_[a] == piece and self.board_[b] == piece and self.board_[c] == piece:
                    protected_[a] = True
                    protected_[b] = True
                    protected_[c] = True
            any_free = False
            for p in range(self.n):
                if self.board_[p] == piece and not protected_[p]:
                    any_free = True
                    break
            for i in range(self.n):
                p = self.by_order_[i]
                if self.board_[p] == piece and (not any_free or not protected_[p]):
                    out[count] = encode_move(KIND_CAPTURE, self.order_[p], 0)
                    count += 1
            return count
        if self.hands_[mover] > 0:
            for i in range(self.n):
                p = self.by_order_[i]
                if self.board_[p] == 0:
                    out[count] = encode_move(KIND_PLACE, self.order_[p], 0)
                    count += 1
            return count
        piece = mover + 1
        for i in range(self.n):
            p = self.by_order_[i]
            if self.board_[p] != piece:
                continue
            for j in range(self.adj_count[p]):
                q = self.adj_[p][j]
                if self.board_[q] == 0:
                    out[count] = encode_move(KIND_SLIDE, self.order_[p], self.order_[q])
                    count += 1
        return count

    cdef void _apply(self, int move) nogil:
        cdef int kind = move >> 12
        cdef int a = self.point_of_order_[(move >> 6) & 63]
        cdef int mover = self.to_move_
        cdef int opp = 1 - mover
        cdef int b, landed
        self.undo_move[self.undo_top] = move
        self.undo_tm[self.undo_top] = mover
        self.undo_pd[self.undo_top] = 1 if self.pending_ else 0
        self.undo_top += 1
        if kind == KIND_CAPTURE:
            self.board_[a] = 0
            self.on_board_[opp] -= 1
            self.captured_[opp] += 1
            self.to_move_ = opp
            self.pending_ = False
            return
        if kind == KIND_PLACE:
            self.board_[a] = mover + 1
            self.hands_[mover] -= 1
            self.on_board_[mover] += 1
            landed = a
        else:
            b = self.point_of_order_[move & 63]
            self.board_[a] = 0
            self.board_[b] = mover + 1
            landed = b
        # A completed mill earns a capture, provided there is anything to take.
        if self._mill_at(landed, mover + 1) and self.on_board_[opp] > 0:
            self.pending_ = True
        else:
            self.pending_ = False
            self.to_move_ = opp

    cdef void _undo(self) nogil:
        self.undo_top -= 1
        cdef int move = self.undo_move[self.undo_top]
        cdef int mover = self.undo_tm[self.undo_top]
        cdef int kind = move >> 12
        cdef int a = self.point_of_order_[(move >> 6) & 63]
        cdef int opp = 1 - mover
        cdef int b
        if kind == KIND_CAPTURE:
            self.board_[a] = opp + 1
            self.on_board_[opp] += 1
            self.captured_[opp] -= 1
        elif kind == KIND_PLACE:
            self.board_[a] = 0
            self.hands_[mover] += 1
            self.on_board_[mover] -= 1
        else:
            b = self.point_of_order_[move & 63]
            self.board_[b] = 0
            self.board_[a] = mover + 1
        self.to_move_ = mover
        self.pending_ = self.undo_pd[self.undo_top] != 0

    cdef double _evaluate(self, int root, double w1, double w2, double w3) nogil:
        cdef int material = (self.hands_[0] + self.on_board_[0]) - (self.hands_[1] + self.on_board_[1])
        cdef int mobility = 0
        cdef int potential = 0
        cdef int p, j, q, piece, free, m, a, b, c, attackers, defenders
        cdef double value
        for p in range(self.n):
            piece = self.board_[p]
            if piece == 0:
                continue
            free = 0
            for j in range(self.adj_count[p]):
                q = self.adj_[p][j]
                if self.board_[q] == 0:
                    free += 1
            if piece == 1:
                mobility += free
            else:
                mobility -= free
        for m in range(self.mill_count):
            a = self.mills_[m][0]
            b = self.mills_[m][1]
            c = self.mills_[m][2]
            attackers = (self.board_[a] == 1) + (self.board_[b] == 1) + (self.board_[c] == 1)
            defenders = (self.board_[a] == 2) + (self.board_[b] == 2) + (self.board_[c] == 2)
            if attackers == 2 and defenders == 0:
                potential += 1
            elif defenders == 2 and attackers == 0:
                potential -= 1
        value = w1 * material + w2 * mobility + w3 * potential
        return value if root == 0 else -value

    cdef int _winner(self, int move_count) nogil:
        """-1 while the game runs, else the winning side's index."""
        if self.hands_[0] + self.on_board_[0] < 3:
            return 1
        if self.hands_[1] + self.on_board_[1] < 3:
            return 0
        if move_count == 0:
            return 1 - self.to_move_
        return -1

    cdef double _value(self, int depth, double alpha, double beta, int root,
                       double w1, double w2, double w3, int level) nogil:
        cdef int count = self._gen_moves(level)
        cdef int winner = self._winner(count)
        cdef int* moves = &self.moves_buf[level * MAXMOVES]
        cdef int i, child_depth, mover
        cdef double best, value
        if winner >= 0:
            value = WIN_VALUE + depth
            return value if winner == root else -value
        if depth == 0:
            return self._evaluate(root, w1, w2, w3)
        mover = self.to_move_
        if mover == root:
            best = -INFINITY
            for i in range(count):
                self._apply(moves[i])
                child_depth = depth if self.to_move_ == mover else depth - 1
                value = self._value(child_depth, alpha, beta, root, w1, w2, w3, level + 1)
                self._undo()
                if value > best:
                    best = value
                    if best > alpha:
                        alpha = best
                if alpha >= beta:
                    break
            return best
        best = INFINITY
        for i in range(count):
            self._apply(moves[i])
            child_depth = depth if self.to_move_ == mover else depth - 1
            value = self._value(child_depth, alpha, beta, root, w1, w2, w3, level + 1)
            self._undo()
            if value < best:
                best = value
                if best < beta:
                    beta = best
            if alpha >= beta:
                break
        return best

    def gen_moves(self):
        """Legal move ints in ascending order; empty means immobilized."""
        cdef int count = self._gen_moves(MAXLEVELS - 1)
        cdef int i
        moves = []
        for i in range(count):
            moves.append(self.moves_buf[(MAXLEVELS - 1) * MAXMOVES + i])
        return moves

    def apply(self, int move):
        if self.undo_top >= MAXUNDO:
            raise RuntimeError("undo stack overflow")
        self._apply(move)

    def undo(self):
        if self.undo_top == 0:
            raise RuntimeError("undo stack underflow")
        self._undo()

    def evaluate(self, int root, double w1, double w2, double w3):
        return self._evaluate(root, w1, w2, w3)

    def search(self, int depth, double w1, double w2, double w3):
        """Best value and move for the side to move; ties go to the
        lowest move int. Raises on terminal positions."""
        cdef int count, i, child_depth, root, best_move
        cdef double best, value, alpha
        if depth < 1 or depth > MAX_DEPTH:
            raise ValueError(f"depth must be in 1..{MAX_DEPTH}")
        count = self._gen_moves(0)
        if self._winner(count) >= 0:
            raise ValueError("search called on a terminal position")
        root = self.to_move_
        best = -INFINITY
        best_move = -1
        alpha = -INFINITY
        for i in range(count):
            self._apply(self.moves_buf[i])
            child_depth = depth if self.to_move_ == root else depth - 1
            value = self._value(child_depth, alpha, INFINITY, root, w1, w2, w3, 1)
            self._undo()
            # Tight windows keep child values exact whenever they beat alpha,
            # so the strict test still finds the first maximal move.
            if value > best:
                best = value
                best_move = self.moves_buf[i]
                if best > alpha:
                    alpha = best
        return best, best_move


def backend_name():
    return "cython"
