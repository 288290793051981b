from .forecast import (
    MODEL_KINDS,
    Forecaster,
    encode_sequences,
    fit_model,
    from_checkpoint,
    load_checkpoint,
    save_checkpoint,
    to_checkpoint,
)
from .lstm import LstmModel, lstm_fit
from .mlp import MlpModel, mlp_fit
from .ols import LinearModel, ols_fit
from .training import Adam, TrainConfig
