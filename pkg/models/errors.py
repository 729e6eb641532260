"""
Error types raised by the digital net library
"""


class NetError(ValueError):
    """所有网计算错误的基类"""
    pass


class ParameterError(NetError):
    """参数错误：长度不匹配、位串格式错误、权重越界"""
    pass


class DomainError(NetError):
    """定义域错误：空点集、分辨率前提不成立"""
    pass


class UnsupportedError(NetError):
    """不支持的参数组合"""
    pass
