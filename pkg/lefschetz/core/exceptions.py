"""
领域异常定义

所有异常都继承自 ValueError，调用方可以像处理普通参数错误一样捕获；
CLI 根据具体类型映射退出码。
"""
from typing import Optional, Tuple, Union


class LefschetzError(ValueError):
    """所有领域错误的基类"""


class DimensionError(LefschetzError):
    """向量/矩阵的秩与曲面不匹配"""


class InvalidCurveError(LefschetzError):
    """曲线不满足不变量（非本原、分离曲线类非零、sep_genus 越界）"""


class NonSymplecticError(LefschetzError):
    """矩阵不是整数辛矩阵"""


class NotSymmetricError(LefschetzError):
    """输入矩阵不对称"""


class UnsupportedOperationError(LefschetzError):
    """操作不适用于该输入（如对分离曲线做曲线传输）"""


class RelationCheckError(LefschetzError):
    """闭分解的乘积矩阵不是单位矩阵"""


class SpinDeclarationError(LefschetzError):
    """声明的自旋结构在某个消没圈上取值不为 1"""


class SpinMismatchError(LefschetzError):
    """要求自旋输出时，各部分的自旋声明不一致"""


class BoundaryError(LefschetzError):
    """需要闭分解（over S²）却得到相对分解（over D²）"""


class NonIntegralSignatureError(LefschetzError):
    """Endo 公式给出非整数，说明输入不适用"""


class InconsistentInvariantsError(LefschetzError):
    """e 与 σ 给出的 b± 为负或不是整数"""


class MissingCertificateError(LefschetzError):
    """缺少前置证书（如完美 Morse 证书需要单连通证书）"""


class PreconditionError(LefschetzError):
    """构造的前置条件不满足，消息中指明缺少的条件"""


class WordSyntaxError(LefschetzError):
    """扭转词或 Hurwitz 调度表达式语法错误"""


class FactorizationFormatError(LefschetzError):
    """分解文件不符合格式，消息带行号/字段定位；loc 为出错字段在文件中的路径"""

    def __init__(self, message: str, loc: Optional[Tuple[Union[str, int], ...]] = None):
        super().__init__(message)
        self.loc = loc


class HurwitzIndexError(LefschetzError):
    """Hurwitz 移动的下标越界"""

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step
