from pydantic import BaseModel


class TrainingDefaults(BaseModel):
    """Hyperparameter defaults for the encoder-decoder classifiers and their training runs"""

    # Layer sizes - desk-scale defaults, all overridable per run
    EMBED_DIM: int = 64
    CONV_KERNEL_WIDTH: int = 3
    CONV_OUT_CHANNELS: int = 64
    RNN_HIDDEN: int = 64            # per direction; 128 after the bidirectional concat
    ATTENTION_DIM: int = 64

    # Regularization
    DROPOUT_NODE: float = 0.4
    DROPOUT_RECURRENT: float = 0.3

    # Adam
    LEARNING_RATE: float = 1e-3
    BETA1: float = 0.9
    BETA2: float = 0.999
    EPSILON: float = 1e-8
    CLIP_NORM: float = 5.0          # 0 disables clipping

    # Loop
    BATCH_SIZE: int = 32
    MAX_EPOCHS: int = 200
    PATIENCE: int = 5
    MIN_DELTA: float = 0.0
    VALIDATION_FRACTION: float = 0.1

    # Data
    TRAIN_FRACTION: float = 0.8
    SEED: int = 42
    MIN_TOKEN_COUNT: int = 5
    MAX_LEN_PERCENTILE: float = 95.0
    MAX_LEN_CAP: int = 64

    N_CLASSES: int = 7


# Global instance
training_defaults = TrainingDefaults()
