"""Cavity Route - 腔 QED 网络中的完美路由模拟器"""

__version__ = "0.1.0"
