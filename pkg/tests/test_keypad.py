from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oacs.keypad import (
    LAYOUT,
    N_COLS,
    N_ROWS,
    Debouncer,
    MatrixKeypad,
    SwitchClosure,
    closure_for,
    decode,
    scan_cycle,
)

ALL_SWITCHES = [SwitchClosure(r, c) for r in range(N_ROWS) for c in range(N_COLS)]


def oracle_detected(closed):
    """Independent electrical model: a graph of row/column nets joined by
    closed switches; (r, c) reads closed iff the nets are connected."""
    g = nx.Graph()
    g.add_nodes_from(("row", r) for r in range(N_ROWS))
    g.add_nodes_from(("col", c) for c in range(N_COLS))
    g.add_edges_from((("row", r), ("col", c)) for r, c in closed)
    return frozenset(
        SwitchClosure(r, c)
        for r in range(N_ROWS)
        for c in range(N_COLS)
        if nx.has_path(g, ("row", r), ("col", c))
    )


def oracle_key_events(timeline, debounce_ms):
    """Tick-by-tick replay of the debounce rule over closure sets."""
    events = []
    emitted = set()
    candidate = None
    since = 0
    for now, closed in enumerate(timeline, start=1):
        detected = oracle_detected(closed)
        emitted &= detected
        if detected != frozenset(closed) or len(detected) != 1:
            candidate = None
            continue
        (only,) = detected
        if only != candidate:
            candidate = only
            since = now
        if now - since + 1 >= debounce_ms and only not in emitted:
            emitted.add(only)
            events.append((decode(only), now))
    return events


def replay(keypad, timeline):
    events = []
    held = set()
    for now, closed in enumerate(timeline, start=1):
        for sym in [decode(sc) for sc in closed if sc not in held]:
            keypad.press(sym)
        for sc in list(held):
            if sc not in closed:
                keypad.release(decode(sc))
        held = set(closed)
        event = keypad.tick(now)
        if event is not None:
            events.append((event.key, event.at_tick))
    return events


class TestDecode:
    def test_layout_corners(self):
        assert decode((0, 0)) == "1"
        assert decode((3, 1)) == "0"
        assert decode((3, 2)) == "#"

    def test_all_twelve(self):
        seen = set()
        for sc in ALL_SWITCHES:
            sym = decode(sc)
            assert sym == LAYOUT[sc.row][sc.col]
            seen.add(sym)
        assert seen == {"0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "*", "#"}

    def test_closure_for_inverts_decode(self):
        for sc in ALL_SWITCHES:
            assert closure_for(decode(sc)) == sc

    def test_bad_indices(self):
        with pytest.raises(ValueError):
            decode((4, 0))
        with pytest.raises(ValueError):
            decode((0, 3))
        with pytest.raises(ValueError):
            closure_for("A")


class TestScan:
    def test_empty(self):
        result = scan_cycle(())
        assert result.detected == frozenset()
        assert not result.ghosted

    def test_single_closures_exhaustive(self):
        for sc in ALL_SWITCHES:
            result = scan_cycle({sc})
            assert result.detected == {sc}
            assert not result.ghosted

    def test_l_shape_produces_phantom(self):
        closed = {SwitchClosure(0, 0), SwitchClosure(0, 1), SwitchClosure(1, 0)}
        result = scan_cycle(closed)
        assert SwitchClosure(1, 1) in result.detected
        assert result.ghosted

    def test_all_l_shapes_exhaustive(self):
        count = 0
        for r1 in range(N_ROWS):
            for r2 in range(N_ROWS):
                if r2 == r1:
                    continue
                for c1 in range(N_COLS):
                    for c2 in range(N_COLS):
                        if c2 == c1:
                            continue
                        closed = {
                            SwitchClosure(r1, c1),
                            SwitchClosure(r1, c2),
                            SwitchClosure(r2, c1),
                        }
                        result = scan_cycle(closed)
                        assert SwitchClosure(r2, c2) in result.detected
                        assert result.ghosted
                        assert result.detected == oracle_detected(closed)
                        count += 1
        assert count == N_ROWS * (N_ROWS - 1) * N_COLS * (N_COLS - 1)

    def test_two_keys_same_row_do_not_ghost(self):
        closed = {SwitchClosure(2, 0), SwitchClosure(2, 2)}
        result = scan_cycle(closed)
        assert result.detected == closed
        assert not result.ghosted

    def test_diagonal_pair_does_not_ghost(self):
        closed = {SwitchClosure(0, 0), SwitchClosure(1, 1)}
        result = scan_cycle(closed)
        assert result.detected == closed
        assert not result.ghosted

    def test_every_subset_matches_oracle(self):
        # 2^12 subsets is small enough to enumerate outright
        for size in range(len(ALL_SWITCHES) + 1):
            if size > 4:
                break
            for combo in combinations(ALL_SWITCHES, size):
                closed = frozenset(combo)
                result = scan_cycle(closed)
                assert result.detected == oracle_detected(closed)
                assert result.detected >= closed
                assert result.ghosted == (result.detected != closed)

    @settings(max_examples=200)
    @given(st.frozensets(st.sampled_from(ALL_SWITCHES)))
    def test_random_subsets_match_oracle(self, closed):
        result = scan_cycle(closed)
        assert result.detected == oracle_detected(closed)
        assert result.detected >= closed
        assert result.ghosted == (result.detected != closed)


def hold(closure, ms):
    return [{closure}] * ms


QUIET = [set()]


class TestDebounce:
    def test_hold_past_window_emits_once(self):
        sc = SwitchClosure(1, 1)
        timeline = hold(sc, 25) + QUIET * 10
        keypad = MatrixKeypad(debounce_ms=20)
        events = replay(keypad, timeline)
        assert events == [("5", 20)]
        assert events == oracle_key_events(timeline, 20)

    def test_short_tap_emits_nothing(self):
        sc = SwitchClosure(0, 2)
        timeline = hold(sc, 5) + QUIET * 40
        keypad = MatrixKeypad(debounce_ms=20)
        assert replay(keypad, timeline) == []

    def test_long_hold_has_no_autorepeat(self):
        sc = SwitchClosure(3, 1)
        timeline = hold(sc, 10_000) + QUIET * 5
        keypad = MatrixKeypad(debounce_ms=20)
        events = replay(keypad, timeline)
        assert events == [("0", 20)]

    def test_release_and_repress_emits_again(self):
        sc = SwitchClosure(0, 0)
        timeline = hold(sc, 30) + QUIET * 3 + hold(sc, 30) + QUIET * 3
        keypad = MatrixKeypad(debounce_ms=20)
        events = replay(keypad, timeline)
        assert [key for key, _ in events] == ["1", "1"]

    def test_ghosted_scan_never_emits(self):
        trio = {SwitchClosure(0, 0), SwitchClosure(0, 1), SwitchClosure(1, 0)}
        timeline = [set(trio)] * 100 + QUIET * 5
        keypad = MatrixKeypad(debounce_ms=20)
        assert replay(keypad, timeline) == []

    def test_two_keys_held_emit_nothing(self):
        pair = {SwitchClosure(0, 0), SwitchClosure(2, 2)}
        timeline = [set(pair)] * 100 + QUIET * 5
        keypad = MatrixKeypad(debounce_ms=20)
        assert replay(keypad, timeline) == []

    def test_second_key_after_first_released(self):
        a, b = SwitchClosure(0, 0), SwitchClosure(2, 2)
        timeline = hold(a, 30) + [{a, b}] * 10 + hold(b, 30) + QUIET * 5
        keypad = MatrixKeypad(debounce_ms=20)
        events = replay(keypad, timeline)
        # 'a' fires once; 'b' fires after it is alone and stable
        assert [key for key, _ in events] == ["1", "9"]
        assert events == oracle_key_events(timeline, 20)

    def test_interrupted_press_does_not_refire(self):
        a, b = SwitchClosure(0, 0), SwitchClosure(2, 2)
        timeline = hold(a, 30) + [{a, b}] * 10 + hold(a, 40) + QUIET * 5
        keypad = MatrixKeypad(debounce_ms=20)
        events = replay(keypad, timeline)
        assert [key for key, _ in events] == ["1"]

    def test_debouncer_validates_window(self):
        with pytest.raises(ValueError):
            Debouncer(debounce_ms=0)

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(
            st.tuples(
                st.sampled_from(ALL_SWITCHES),
                st.integers(min_value=1, max_value=40),
                st.integers(min_value=0, max_value=30),
            ),
            max_size=8,
        )
    )
    def test_single_key_timelines_match_oracle(self, presses):
        timeline = []
        for sc, hold_ms, gap_ms in presses:
            timeline += [{sc}] * hold_ms + [set()] * gap_ms
        timeline += [set()]
        keypad = MatrixKeypad(debounce_ms=20)
        assert replay(keypad, timeline) == oracle_key_events(timeline, 20)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.frozensets(st.sampled_from(ALL_SWITCHES), max_size=4),
            min_size=1,
            max_size=120,
        )
    )
    def test_arbitrary_timelines_match_oracle(self, timeline):
        keypad = MatrixKeypad(debounce_ms=20)
        impl = replay(keypad, [set(s) for s in timeline])
        want = oracle_key_events([set(s) for s in timeline], 20)
        assert impl == want
