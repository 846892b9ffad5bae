# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled image kernels: box downsampling, HSV content masking, and
largest 8-connected component. Semantics must match
chartforge.quality.fallback exactly; the test suite compares the two
backends on random images.
"""

from libc.stdlib cimport free, malloc


cpdef bytes box_downsample(const unsigned char[::1] pixels, int width, int height, int target):
    """Mean box filter onto a target x target grid, round-half-up channels."""
    cdef bytearray out_arr = bytearray(target * target * 3)
    cdef unsigned char[::1] out = out_arr
    cdef int ox, oy, x0, x1, y0, y1, x, y, count
    cdef long long rs, gs, bs
    cdef long long base
    for oy in range(target):
        y0 = (oy * height) // target
        y1 = ((oy + 1) * height) // target
        if y0 >= height:
            y0 = height - 1
        if y1 <= y0:
            y1 = y0 + 1
        for ox in range(target):
            x0 = (ox * width) // target
            x1 = ((ox + 1) * width) // target
            if x0 >= width:
                x0 = width - 1
            if x1 <= x0:
                x1 = x0 + 1
            rs = 0
            gs = 0
            bs = 0
            for y in range(y0, y1):
                base = (<long long> y * width) * 3
                for x in range(x0, x1):
                    rs += pixels[base + 3 * x]
                    gs += pixels[base + 3 * x + 1]
                    bs += pixels[base + 3 * x + 2]
            count = (y1 - y0) * (x1 - x0)
            base = (<long long> oy * target + ox) * 3
            out[base] = <unsigned char> ((2 * rs + count) // (2 * count))
            out[base + 1] = <unsigned char> ((2 * gs + count) // (2 * count))
            out[base + 2] = <unsigned char> ((2 * bs + count) // (2 * count))
    return bytes(out_arr)


cpdef tuple content_stats(const unsigned char[::1] pixels, double s_thresh, double v_thresh):
    """Per-pixel content mask plus saturation/value aggregates.

    A pixel is content iff s > s_thresh or v < v_thresh (HSV s and v).
    Returns (mask bytes, content count, saturation sum, value sum, white count).
    """
    cdef Py_ssize_t n = pixels.shape[0] // 3
    cdef bytearray mask_arr = bytearray(n)
    cdef unsigned char[::1] mask = mask_arr
    cdef Py_ssize_t i
    cdef int r, g, b, mx, mn
    cdef double s, v, sat_sum = 0.0, val_sum = 0.0
    cdef long long content = 0, white = 0
    for i in range(n):
        r = pixels[3 * i]
        g = pixels[3 * i + 1]
        b = pixels[3 * i + 2]
        mx = r if r >= g else g
        if b > mx:
            mx = b
        mn = r if r <= g else g
        if b < mn:
            mn = b
        v = mx / 255.0
        s = 0.0 if mx == 0 else (mx - mn) / (<double> mx)
        sat_sum += s
        val_sum += v
        if s > s_thresh or v < v_thresh:
            mask[i] = 1
            content += 1
        else:
            white += 1
    return bytes(mask_arr), content, sat_sum, val_sum, white


cpdef long long largest_component(const unsigned char[::1] mask, int width, int height):
    """Size of the largest 8-connected component of 1-pixels."""
    cdef Py_ssize_t n = <Py_ssize_t> width * height
    cdef unsigned char* seen = <unsigned char*> malloc(n)
    cdef long long* stack = <long long*> malloc(n * sizeof(long long))
    if seen == NULL or stack == NULL:
        if seen != NULL:
            free(seen)
        if stack != NULL:
            free(stack)
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        seen[i] = 0
    cdef long long best = 0, size, top, cur
    cdef int x, y, nx, ny, dx, dy
    for i in range(n):
        if mask[i] == 0 or seen[i]:
            continue
        size = 0
        top = 0
        stack[top] = i
        top += 1
        seen[i] = 1
        while top > 0:
            top -= 1
            cur = stack[top]
            size += 1
            x = <int> (cur % width)
            y = <int> (cur // width)
            for dy in range(-1, 2):
                ny = y + dy
                if ny < 0 or ny >= height:
                    continue
                for dx in range(-1, 2):
                    if dx == 0 and dy == 0:
                        continue
                    nx = x + dx
                    if nx < 0 or nx >= width:
                        continue
                    cur = <long long> ny * width + nx
                    if mask[cur] and not seen[cur]:
                        seen[cur] = 1
                        stack[top] = cur
                        top += 1
        if size > best:
            best = size
    free(seen)
    free(stack)
    return best
