# 4σ 목표 고장 강도 (사이트당 결함 수)
FOUR_SIGMA_LAMBDA = 0.00621

# 6σ 목표 고장 강도 (사이트당 결함 수)
SIX_SIGMA_LAMBDA = 2.0e-9

# 값이 0.5 이상이면 잠재 신뢰성 법칙의 제약을 벗어남
PROBABILITY_CEILING = 0.5


# 종료 코드
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_IO = 3


# 토크나이저 구분자 모드
DELIMITERS_WHITESPACE = 'ws'
DELIMITERS_WHITESPACE_PUNCT = 'ws+punct'
