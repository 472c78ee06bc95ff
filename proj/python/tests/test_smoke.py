import pytest

import mmgp


def config(popsize, nthreads, generations, seed=1):
    c = mmgp.RunConfig()
    c.popsize = popsize
    c.nthreads = nthreads
    c.generations = generations
    c.seed = seed
    c.buffer_bytes = 256
    c.max_initial_depth = 5
    return c


def test_pool_capacity():
    assert mmgp.pool_capacity(500, 8) == 516
    assert mmgp.pool_capacity(500, 0) == 502


def test_pool_acquire_release():
    pool = mmgp.ExprPool(1, 1, 4)
    assert pool.capacity == 3
    assert pool.free_slots() == [1, 2, 3]
    assert pool.acquire() == 1
    assert pool.chainhead == 2
    assert pool.stats() == (1, 1, 1)
    assert pool.release(1) == 0
    assert pool.acquire() == 1
    pool.acquire()
    pool.acquire()
    with pytest.raises(mmgp.PoolExhaustedError):
        pool.acquire()


def test_breeding_plan():
    plan = mmgp.BreedingPlan.build([(0, 1), (0, 0), (1, 2)], [3, 2, 1])
    assert plan.chain1() == [2]
    assert plan.chain2() == [0, 1]
    assert plan.children(0) == [0, 1, 1]
    assert plan.check_integrity() is None
    assert plan.claim_next() == 2
    assert plan.rem_child(1, 2) == (1, 0)
    assert plan.rem_child(2, 2) == (0, -1)
    plan.move21(2, 0)
    assert plan.chain1() == [0]
    assert plan.chain2() == [1]
    with pytest.raises(mmgp.PlanInvariantError):
        plan.rem_child(2, 2)


def test_trees_and_crossover():
    tree = mmgp.random_tree(3, 4, 64)
    assert 1 <= len(tree) <= 15
    assert tree == mmgp.random_tree(3, 4, 64)
    child = mmgp.subtree_crossover(tree, tree, 64, 9)
    assert len(child) <= 64
    assert mmgp.Problem.quartic().fitness(child) >= 0.0
    # x + 1 at x = 2; constants -5..5 are opcodes 5..15
    assert mmgp.Problem.run(bytes([0, 4, 11]), 2.0) == 3.0


def test_pooled_matches_naive_and_respects_bound():
    for threads in (1, 4):
        pooled = mmgp.run_evolution(config(16, threads, 6, seed=3))
        naive = mmgp.run_evolution_naive(config(16, threads, 6, seed=3))
        assert pooled.genomes == naive.genomes
        assert pooled.fitness_history == naive.fitness_history
        assert pooled.pool_capacity == 16 + 2 * threads
        assert pooled.peak_buffers() <= pooled.pool_capacity
        assert all(row.pool_used_peak >= 17 for row in pooled.stats[1:])


def test_csv_round_trip(tmp_path):
    result = mmgp.run_evolution(config(8, 2, 3))
    path = tmp_path / "run.csv"
    mmgp.emit_csv(result.stats, str(path))
    rows = mmgp.parse_csv(str(path))
    assert len(rows) == 3
    assert [r.pool_max_used for r in rows] == [r.pool_max_used for r in result.stats]
    assert path.read_text().splitlines()[0].startswith("generation,mean_tree_size")
