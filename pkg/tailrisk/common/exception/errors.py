#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from typing import Any

from tailrisk.common.exit_code import ExitCode


class BaseExceptionMixin(Exception):
    """基础异常混入类"""

    code: int
    category: str

    def __init__(self, *, msg: str | None = None, data: Any = None):
        self.msg = msg
        self.data = data
        super().__init__(msg)

    def to_record(self) -> dict[str, Any]:
        """机器可读的错误记录"""
        record = {'category': self.category, 'error': type(self).__name__, 'message': self.msg}
        if self.data is not None:
            record['data'] = self.data
        return record


class InputError(BaseExceptionMixin):
    """输入异常"""

    code = ExitCode.INPUT.code
    category = ExitCode.INPUT.category

    def __init__(self, *, msg: str = 'Bad Input', data: Any = None):
        super().__init__(msg=msg, data=data)


class ParseError(InputError):
    """文件解析异常"""

    def __init__(self, *, msg: str = '文件解析失败', data: Any = None):
        super().__init__(msg=msg, data=data)


class ValidationError(InputError):
    """数据校验异常"""

    def __init__(self, *, msg: str = '数据校验失败', data: Any = None):
        super().__init__(msg=msg, data=data)


class EmptyWindowError(InputError):
    """窗口为空异常"""

    def __init__(self, *, msg: str = '分析日之前没有可用观测', data: Any = None):
        super().__init__(msg=msg, data=data)


class InsufficientHistoryError(InputError):
    """历史长度不足异常"""

    def __init__(self, *, msg: str = '历史观测不足以完成预热', data: Any = None):
        super().__init__(msg=msg, data=data)


class DegenerateTailError(InputError):
    """尾部样本为空异常"""

    def __init__(self, *, msg: str = '置信水平过高，尾部样本数为 0', data: Any = None):
        super().__init__(msg=msg, data=data)


class ZeroVolatilityError(InputError):
    """零波动率异常"""

    def __init__(self, *, msg: str = '已实现波动率为 0', data: Any = None):
        super().__init__(msg=msg, data=data)


class ZeroVarianceError(InputError):
    """零方差异常"""

    def __init__(self, *, msg: str = '窗口内市场收益方差为 0', data: Any = None):
        super().__init__(msg=msg, data=data)


class ZeroVectorError(InputError):
    """零向量异常"""

    def __init__(self, *, msg: str = '权重向量不能为零向量', data: Any = None):
        super().__init__(msg=msg, data=data)


class UnknownConfidenceError(InputError):
    """未知置信水平异常"""

    def __init__(self, *, msg: str = '回测报告不包含该置信水平', data: Any = None):
        super().__init__(msg=msg, data=data)


class EmptyRegimeError(InputError):
    """市场区间为空异常"""

    def __init__(self, *, msg: str = '市场区间内没有回测日期', data: Any = None):
        super().__init__(msg=msg, data=data)


class InfeasibleError(BaseExceptionMixin):
    """约束不可行异常"""

    code = ExitCode.INFEASIBLE.code
    category = ExitCode.INFEASIBLE.category

    def __init__(self, *, msg: str = '约束集不可行', data: Any = None):
        super().__init__(msg=msg, data=data)


class UnboundedError(InfeasibleError):
    """目标无界异常"""

    def __init__(self, *, msg: str = '约束集无法限制损失，目标无界', data: Any = None):
        super().__init__(msg=msg, data=data)


class NumericalError(BaseExceptionMixin):
    """数值计算异常"""

    code = ExitCode.NUMERICAL.code
    category = ExitCode.NUMERICAL.category

    def __init__(self, *, msg: str = '数值计算失败', data: Any = None):
        super().__init__(msg=msg, data=data)
