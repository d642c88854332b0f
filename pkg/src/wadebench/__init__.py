"""Learning-efficiency benchmark workbench.

Ten synthetic sequence tasks, the WADE data-efficiency metric, frozen
reservoir models (echo-state network and cellular automaton) with an online
softmax readout, fully trained RNN/LSTM baselines, an experiment harness,
and an HTTP service for the human evaluation protocol.
"""

from .baseline import (Adam, ElmanRnn, Lstm, LstmConfig, RnnConfig,
                       lstm_hidden_size, match_hidden_size, train_baseline)
from .harness import (ExperimentPlan, ModelSpec, RunRecord, aggregate,
                      run_experiment, run_single, sweep_rules)
from .metric import (AccuracyCurve, CheckpointSet, curve, evaluation_steps,
                     time_to_threshold, wade, wade_from_file)
from .readout import Readout
from .reservoir import (CaConfig, CellularAutomatonReservoir, EchoStateNetwork,
                        EsnConfig, ca_rule_table, ca_step, inject)
from .tasks import (Dataset, TaskSample, TaskSpec, Vocabulary, count_oracle,
                    derive_mask, encode_one_hot, generate, split)

__version__ = "0.1.0"

__all__ = [
    "Adam", "ElmanRnn", "Lstm", "LstmConfig", "RnnConfig",
    "lstm_hidden_size", "match_hidden_size", "train_baseline",
    "ExperimentPlan", "ModelSpec", "RunRecord", "aggregate",
    "run_experiment", "run_single", "sweep_rules",
    "AccuracyCurve", "CheckpointSet", "curve", "evaluation_steps",
    "time_to_threshold", "wade", "wade_from_file",
    "Readout",
    "CaConfig", "CellularAutomatonReservoir", "EchoStateNetwork",
    "EsnConfig", "ca_rule_table", "ca_step", "inject",
    "Dataset", "TaskSample", "TaskSpec", "Vocabulary", "count_oracle",
    "derive_mask", "encode_one_hot", "generate", "split",
    "__version__",
]
