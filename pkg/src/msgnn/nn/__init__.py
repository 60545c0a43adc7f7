from .checkpoint import load_model, save_model
from .layers import ChebConvLayer, complex_relu, layer_backward, layer_forward, relu_mask
from .model import ModelConfig, MsgnnModel, scaled_laplacian, softmax
from .optim import Adam
from .train import History, train_link, train_node

__all__ = [
    "Adam",
    "ChebConvLayer",
    "History",
    "ModelConfig",
    "MsgnnModel",
    "complex_relu",
    "layer_backward",
    "layer_forward",
    "load_model",
    "relu_mask",
    "save_model",
    "scaled_laplacian",
    "softmax",
    "train_link",
    "train_node",
]
