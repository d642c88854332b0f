import math

import numpy as np
import pytest

from wadebench import baseline, tasks
from wadebench.baseline import (Adam, ElmanRnn, Lstm, LstmConfig, RnnConfig,
                                adam_step, lstm_hidden_size, match_hidden_size,
                                masked_test_accuracy, train_baseline)
from wadebench.errors import ConfigError


def masked_loss(model, tokens, mask):
    """Loss recomputed from the forward pass alone (for finite differences).

    Position t is predicted from the state after t - 1, so its target reads
    the logits at index t - 1.
    """
    _, logits = model.forward(tokens)
    total = 0.0
    for t in np.flatnonzero(np.asarray(mask, dtype=bool)):
        z = logits[t - 1]
        probs = np.exp(z - z.max())
        probs /= probs.sum()
        total -= np.log(probs[int(tokens[t])])
    return total


def finite_difference_check(model, tokens, mask, eps=1e-4):
    grads, loss = model.gradients(tokens, mask)
    assert math.isfinite(loss)
    worst = 0.0
    for name, weights in model.params.items():
        for idx in np.ndindex(*weights.shape):
            original = weights[idx]
            weights[idx] = original + eps
            plus = masked_loss(model, tokens, mask)
            weights[idx] = original - eps
            minus = masked_loss(model, tokens, mask)
            weights[idx] = original
            fd = (plus - minus) / (2 * eps)
            analytic = grads[name][idx]
            err = abs(analytic - fd)
            if err > 1e-8:   # absolute agreement for near-zero components
                worst = max(worst, err / max(abs(analytic), abs(fd)))
    return worst


def random_instance(rng, model_cls, config_cls):
    hidden = int(rng.integers(2, 9))
    vocab = int(rng.integers(2, 6))
    length = int(rng.integers(2, 7))
    model = model_cls(config_cls(hidden=hidden, vocab_size=vocab,
                                 seed=int(rng.integers(10000))))
    tokens = rng.integers(0, vocab, size=length).tolist()
    mask = np.zeros(length, dtype=bool)
    n_masked = int(rng.integers(1, length))
    mask[rng.choice(np.arange(1, length), size=n_masked, replace=False)] = True
    return model, tokens, mask.tolist()


class TestHiddenSizeMatching:
    def test_reference_case(self):
        assert match_hidden_size(5, 9000) == 90

    def test_unit_vocabulary(self):
        # positive root of h^2 + 2h = 1800 is ~41.44
        assert match_hidden_size(1, 1800) == 41

    def test_default_target_is_1800_l(self):
        assert match_hidden_size(5) == match_hidden_size(5, 9000)

    def test_degenerate_target_rejected(self):
        with pytest.raises(ConfigError):
            match_hidden_size(5, 0)

    def test_parameter_parity_for_benchmark_vocabularies(self):
        for task_id in range(1, 11):
            vocab = tasks.vocabulary_for(tasks.TaskSpec(task_id)).size
            h = match_hidden_size(vocab)
            model = ElmanRnn(RnnConfig(hidden=h, vocab_size=vocab))
            assert model.parameter_count() == h * h + 2 * h * vocab
            assert abs(model.parameter_count() - 1800 * vocab) <= 2 * h + 1

    def test_lstm_parity(self):
        for vocab in (2, 15, 16, 46):
            h = lstm_hidden_size(vocab)
            model = Lstm(LstmConfig(hidden=h, vocab_size=vocab))
            assert model.parameter_count() == 4 * (h * h + h * vocab) + h * vocab
            # quadratic rounding slack: d(params)/dh = 8h + 5L
            assert abs(model.parameter_count() - 1800 * vocab) <= 8 * h + 5 * vocab


class TestInitialization:
    def test_weights_strictly_inside_bound(self):
        for seed in range(3):
            model = ElmanRnn(RnnConfig(hidden=40, vocab_size=6, seed=seed))
            bound = math.sqrt(1 / 40)
            for w in model.params.values():
                assert np.all(np.abs(w) < bound)
        model = Lstm(LstmConfig(hidden=30, vocab_size=5, seed=0))
        bound = math.sqrt(1 / 30)
        for w in model.params.values():
            assert np.all(np.abs(w) < bound)

    def test_deterministic_per_seed(self):
        a = ElmanRnn(RnnConfig(hidden=10, vocab_size=3, seed=5))
        b = ElmanRnn(RnnConfig(hidden=10, vocab_size=3, seed=5))
        for name in a.params:
            assert np.array_equal(a.params[name], b.params[name])


class TestRnnForward:
    def test_zero_weights_give_zero_states(self):
        model = ElmanRnn(RnnConfig(hidden=4, vocab_size=3, seed=0))
        for name in model.params:
            model.params[name][:] = 0.0
        states, logits = model.forward([0, 1, 2])
        assert np.array_equal(states, np.zeros((3, 4)))
        assert np.array_equal(logits, np.zeros((3, 3)))

    def test_single_token_hand_value(self):
        model = ElmanRnn(RnnConfig(hidden=2, vocab_size=2, seed=0))
        model.params["w_ih"][:] = [[0.5, 0.0], [-0.25, 0.0]]
        model.params["w_hh"][:] = 0.0
        model.params["w_out"][:] = [[1.0, 0.0], [0.0, 2.0]]
        states, logits = model.forward([0])
        assert states[0] == pytest.approx([np.tanh(0.5), np.tanh(-0.25)])
        assert logits[0] == pytest.approx([np.tanh(0.5), 2 * np.tanh(-0.25)])

    def test_determinism(self):
        model = ElmanRnn(RnnConfig(hidden=8, vocab_size=4, seed=1))
        a = model.forward([0, 3, 2, 1])
        b = model.forward([0, 3, 2, 1])
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_batch_matches_single(self):
        model = ElmanRnn(RnnConfig(hidden=6, vocab_size=4, seed=2))
        sequences = [[0, 1, 2], [3, 2, 1], [1, 1, 0]]
        batch = model.states_batch(np.array(sequences))
        for b, seq in enumerate(sequences):
            states, _ = model.forward(seq)
            assert batch[b] == pytest.approx(states)

    def test_lstm_batch_matches_single(self):
        model = Lstm(LstmConfig(hidden=5, vocab_size=4, seed=3))
        sequences = [[0, 1, 2, 3], [3, 2, 1, 0]]
        batch = model.states_batch(np.array(sequences))
        for b, seq in enumerate(sequences):
            states, _ = model.forward(seq)
            assert batch[b] == pytest.approx(states)


class TestLstmForward:
    def test_zero_weights_one_step(self):
        # all gates sigmoid(0) = 0.5, candidate tanh(0) = 0:
        # c = 0.5*0 + 0.5*0 = 0, h = 0.5*tanh(0) = 0
        model = Lstm(LstmConfig(hidden=3, vocab_size=2, seed=0))
        for name in model.params:
            model.params[name][:] = 0.0
        states, logits, cache = model.forward([1], return_cache=True)
        assert np.array_equal(states[0], np.zeros(3))
        assert cache["i"][0] == pytest.approx(np.full(3, 0.5))
        assert cache["f"][0] == pytest.approx(np.full(3, 0.5))
        assert np.array_equal(cache["c"][0], np.zeros(3))

    def test_saturated_forget_gate_carries_cell(self):
        model = Lstm(LstmConfig(hidden=2, vocab_size=2, seed=1))
        for name in model.params:
            model.params[name][:] = 0.0
        model.params["w_xf"][:] = 100.0   # forget gate pinned to 1
        states, logits, cache = model.forward([0, 1, 0, 1], return_cache=True)
        cells = np.array(cache["c"])
        assert np.array_equal(cells[0], cells[-1])


class TestBpttGradients:
    def test_rnn_matches_finite_differences_100_instances(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            model, tokens, mask = random_instance(rng, ElmanRnn, RnnConfig)
            assert finite_difference_check(model, tokens, mask) < 1e-4

    def test_lstm_matches_finite_differences_100_instances(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            model, tokens, mask = random_instance(rng, Lstm, LstmConfig)
            assert finite_difference_check(model, tokens, mask) < 1e-4

    def test_all_false_mask_rejected(self):
        model = ElmanRnn(RnnConfig(hidden=3, vocab_size=2, seed=0))
        with pytest.raises(ConfigError):
            model.gradients([0, 1], [False, False])

    def test_weights_outside_light_cone_have_zero_gradient(self):
        # only position 1 is masked: tokens after index 0 cannot influence
        # the loss, so their input columns get no gradient
        model = ElmanRnn(RnnConfig(hidden=4, vocab_size=4, seed=5))
        tokens = [0, 1, 2, 3]
        grads, _ = model.gradients(tokens, [False, True, False, False])
        assert np.allclose(grads["w_ih"][:, 2], 0.0)
        assert np.allclose(grads["w_ih"][:, 3], 0.0)
        assert not np.allclose(grads["w_ih"][:, 0], 0.0)


class TestAdam:
    def test_zero_gradient_keeps_parameters(self):
        params = {"w": np.ones((2, 2))}
        opt = Adam()
        for _ in range(10):
            opt.update(params, {"w": np.zeros((2, 2))})
        assert np.array_equal(params["w"], np.ones((2, 2)))

    def test_first_step_is_signlike(self):
        params = {"w": np.zeros(3)}
        grad = np.array([0.5, -2.0, 1e-3])
        opt = Adam(learning_rate=0.01)
        opt.update(params, {"w": grad})
        assert params["w"] == pytest.approx(-0.01 * np.sign(grad), rel=1e-3)

    def test_zero_learning_rate_is_identity(self):
        params = {"w": np.full(4, 2.0)}
        opt = Adam(learning_rate=0.0)
        opt.update(params, {"w": np.ones(4)})
        assert np.array_equal(params["w"], np.full(4, 2.0))

    def test_functional_wrapper(self):
        params = {"w": np.zeros(2)}
        out = adam_step(Adam(learning_rate=0.1), params, {"w": np.ones(2)})
        assert out is params
        assert params["w"] == pytest.approx(-0.1 * np.ones(2), rel=1e-3)

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        grads = [rng.normal(size=(3, 3)) for _ in range(5)]
        results = []
        for _ in range(2):
            params = {"w": np.zeros((3, 3))}
            opt = Adam()
            for g in grads:
                opt.update(params, {"w": g})
            results.append(params["w"].copy())
        assert np.array_equal(results[0], results[1])


class TestTrainBaseline:
    def _small_dataset(self, task_id=1, count=60, seed=0):
        ds = tasks.generate(tasks.TaskSpec(task_id), seed, count)
        return tasks.split(ds, 0.8, seed)

    def test_requires_split(self):
        ds = tasks.generate(tasks.TaskSpec(1), 0, 10)
        model = ElmanRnn(RnnConfig(hidden=4, vocab_size=2, seed=0))
        with pytest.raises(ConfigError):
            train_baseline(model, ds)

    def test_curve_covers_all_epochs(self):
        ds = self._small_dataset()
        model = ElmanRnn(RnnConfig(hidden=8, vocab_size=2, seed=0))
        curve = train_baseline(model, ds, epochs=2)
        assert curve.points[-1][0] == 2 * len(ds.train_indices)

    def test_deterministic_given_seeds(self):
        ds = self._small_dataset()
        curves = []
        for _ in range(2):
            model = ElmanRnn(RnnConfig(hidden=8, vocab_size=2, seed=1))
            curves.append(train_baseline(model, ds, epochs=2, shuffle_seed=3))
        assert curves[0] == curves[1]

    def test_learns_above_chance_on_periodic_task(self):
        # small hidden size, a few epochs: should still beat the 0.5 chance
        # level of the binary vocabulary
        finals = []
        for seed in range(3):
            ds = self._small_dataset(seed=seed, count=80)
            model = ElmanRnn(RnnConfig(hidden=16, vocab_size=2, seed=seed))
            curve = train_baseline(model, ds, epochs=4, shuffle_seed=seed)
            finals.append(curve.points[-1][1])
        assert np.mean(finals) > 0.5

    def test_masked_test_accuracy_pools_positions(self):
        ds = self._small_dataset()
        model = ElmanRnn(RnnConfig(hidden=4, vocab_size=2, seed=0))
        samples = [ds.samples[i] for i in ds.test_indices]
        acc = masked_test_accuracy(model, samples)
        correct = total = 0
        for s in samples:
            states, logits = model.forward(s.tokens)
            for t in np.flatnonzero(np.asarray(s.mask, bool)):
                correct += int(np.argmax(logits[t - 1]) == s.tokens[t])
                total += 1
        assert acc == pytest.approx(correct / total)


class TestCheckpoint:
    def test_rnn_round_trip(self, tmp_path):
        model = ElmanRnn(RnnConfig(hidden=7, vocab_size=3, seed=4))
        path = tmp_path / "rnn.npz"
        baseline.save_checkpoint(model, path)
        loaded = baseline.load_checkpoint(path)
        assert isinstance(loaded, ElmanRnn)
        for name in model.params:
            assert np.array_equal(loaded.params[name], model.params[name])

    def test_lstm_round_trip(self, tmp_path):
        model = Lstm(LstmConfig(hidden=5, vocab_size=4, seed=6))
        path = tmp_path / "lstm.npz"
        baseline.save_checkpoint(model, path)
        loaded = baseline.load_checkpoint(path)
        assert isinstance(loaded, Lstm)
        states_a, logits_a = model.forward([0, 1, 2])
        states_b, logits_b = loaded.forward([0, 1, 2])
        assert np.array_equal(logits_a, logits_b)


class TestLstmTraining:
    def test_trains_end_to_end(self):
        ds = tasks.split(tasks.generate(tasks.TaskSpec(1), 3, 40), 0.8, 3)
        model = Lstm(LstmConfig(hidden=8, vocab_size=2, seed=3))
        curve = train_baseline(model, ds, epochs=1)
        assert curve.points[-1][0] == len(ds.train_indices)
        assert all(0.0 <= a <= 1.0 for _, a in curve.points)


class TestDivergenceHandling:
    def test_non_finite_loss_raises(self):
        ds = tasks.split(tasks.generate(tasks.TaskSpec(1), 0, 20), 0.8, 0)
        model = ElmanRnn(RnnConfig(hidden=4, vocab_size=2, seed=0))
        model.params["w_out"][:] = np.inf
        with pytest.raises(baseline.DivergenceError):
            train_baseline(model, ds, epochs=1)

    def test_harness_records_failed_run(self):
        from wadebench import harness

        plan = harness.ExperimentPlan(
            tasks=(1,), models=(harness.ModelSpec("rnn", "rnn", {"hidden": 5}),),
            sequences=20, runs=1, epochs=1)
        model_spec = plan.models[0]
        original = baseline.ElmanRnn.gradients

        def exploding(self, tokens, mask):
            grads, _ = original(self, tokens, mask)
            return grads, float("nan")

        baseline.ElmanRnn.gradients = exploding
        try:
            record = harness.run_single(plan, 1, model_spec, 0)
        finally:
            baseline.ElmanRnn.gradients = original
        assert record.failed
        assert record.wade == 0.0
        assert "non-finite" in record.error
