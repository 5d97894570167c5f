/**
 * A momentum density sampled on a uniform grid.
 */
export class Density {
    static __wrap(ptr) {
        const obj = Object.create(Density.prototype);
        obj.__wbg_ptr = ptr;
        DensityFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        DensityFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_density_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get mean() {
        const ret = wasm.density_mean(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    get momenta() {
        const ret = wasm.density_momenta(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get values() {
        const ret = wasm.density_values(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get variance() {
        const ret = wasm.density_variance(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) Density.prototype[Symbol.dispose] = Density.prototype.free;

/**
 * Friction coefficient from the scattering integral and from the asymptotic
 * power law, on a log grid of reduced temperatures.
 */
export class FrictionCurve {
    static __wrap(ptr) {
        const obj = Object.create(FrictionCurve.prototype);
        obj.__wbg_ptr = ptr;
        FrictionCurveFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        FrictionCurveFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_frictioncurve_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    get asymptotic() {
        const ret = wasm.frictioncurve_asymptotic(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get integral() {
        const ret = wasm.frictioncurve_integral(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get reduced() {
        const ret = wasm.frictioncurve_reduced(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) FrictionCurve.prototype[Symbol.dispose] = FrictionCurve.prototype.free;

/**
 * Bath parameters shared by the density and Fisher-information views.
 */
export class Setup {
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        SetupFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_setup_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get exponent() {
        const ret = wasm.__wbg_get_setup_exponent(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {number}
     */
    get gamma() {
        const ret = wasm.__wbg_get_setup_gamma(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get impurity_mass() {
        const ret = wasm.__wbg_get_setup_impurity_mass(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get initial_momentum() {
        const ret = wasm.__wbg_get_setup_initial_momentum(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get initial_width() {
        const ret = wasm.__wbg_get_setup_initial_width(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set exponent(arg0) {
        wasm.__wbg_set_setup_exponent(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set gamma(arg0) {
        wasm.__wbg_set_setup_gamma(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set impurity_mass(arg0) {
        wasm.__wbg_set_setup_impurity_mass(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set initial_momentum(arg0) {
        wasm.__wbg_set_setup_initial_momentum(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set initial_width(arg0) {
        wasm.__wbg_set_setup_initial_width(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} impurity_mass
     * @param {number} gamma
     * @param {number} exponent
     * @param {number} initial_momentum
     * @param {number} initial_width
     */
    constructor(impurity_mass, gamma, exponent, initial_momentum, initial_width) {
        const ret = wasm.setup_new(impurity_mass, gamma, exponent, initial_momentum, initial_width);
        this.__wbg_ptr = ret;
        SetupFinalization.register(this, this.__wbg_ptr, this);
        return this;
    }
}
if (Symbol.dispose) Setup.prototype[Symbol.dispose] = Setup.prototype.free;

/**
 * `regime` is `weak`, `strong-low` or `strong-high`; the latter uses unit
 * reflection, the others the calibrated quadratic reflection.
 * @param {number} impurity_mass
 * @param {number} coupling
 * @param {string} regime
 * @param {number} reduced_min
 * @param {number} reduced_max
 * @param {number} points
 * @returns {FrictionCurve}
 */
export function friction_curve(impurity_mass, coupling, regime, reduced_min, reduced_max, points) {
    const ptr0 = passStringToWasm0(regime, wasm.__wbindgen_malloc, wasm.__wbindgen_realloc);
    const len0 = WASM_VECTOR_LEN;
    const ret = wasm.friction_curve(impurity_mass, coupling, ptr0, len0, reduced_min, reduced_max, points);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return FrictionCurve.__wrap(ret[0]);
}

/**
 * Fisher information after `i * span / points` relaxation times, for
 * `i = 1..=points`, divided by its value after one relaxation time.
 * @param {Setup} setup
 * @param {number} temperature
 * @param {number} span
 * @param {number} points
 * @returns {Float64Array}
 */
export function gamma_curve(setup, temperature, span, points) {
    _assertClass(setup, Setup);
    const ret = wasm.gamma_curve(setup.__wbg_ptr, temperature, span, points);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * Density after `exposure` relaxation times at `temperature`, computed with
 * `method` (`gaussian`, `spectral` or `fdm`) on `points` grid points.
 * @param {Setup} setup
 * @param {number} temperature
 * @param {number} exposure
 * @param {string} method
 * @param {number} points
 * @returns {Density}
 */
export function propagate(setup, temperature, exposure, method, points) {
    _assertClass(setup, Setup);
    const ptr0 = passStringToWasm0(method, wasm.__wbindgen_malloc, wasm.__wbindgen_realloc);
    const len0 = WASM_VECTOR_LEN;
    const ret = wasm.propagate(setup.__wbg_ptr, temperature, exposure, ptr0, len0, points);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Density.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./impurity_thermometry_web_bg.js": import0,
    };
}

const DensityFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_density_free(ptr, 1));
const FrictionCurveFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_frictioncurve_free(ptr, 1));
const SetupFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_setup_free(ptr, 1));

function _assertClass(instance, klass) {
    if (!(instance instanceof klass)) {
        throw new Error(`expected instance of ${klass.name}`);
    }
}

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function passStringToWasm0(arg, malloc, realloc) {
    if (realloc === undefined) {
        const buf = cachedTextEncoder.encode(arg);
        const ptr = malloc(buf.length, 1) >>> 0;
        getUint8ArrayMemory0().subarray(ptr, ptr + buf.length).set(buf);
        WASM_VECTOR_LEN = buf.length;
        return ptr;
    }

    let len = arg.length;
    let ptr = malloc(len, 1) >>> 0;

    const mem = getUint8ArrayMemory0();

    let offset = 0;

    for (; offset < len; offset++) {
        const code = arg.charCodeAt(offset);
        if (code > 0x7F) break;
        mem[ptr + offset] = code;
    }
    if (offset !== len) {
        if (offset !== 0) {
            arg = arg.slice(offset);
        }
        ptr = realloc(ptr, len, len = offset + arg.length * 3, 1) >>> 0;
        const view = getUint8ArrayMemory0().subarray(ptr + offset, ptr + len);
        const ret = cachedTextEncoder.encodeInto(arg, view);

        offset += ret.written;
        ptr = realloc(ptr, len, offset, 1) >>> 0;
    }

    WASM_VECTOR_LEN = offset;
    return ptr;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

const cachedTextEncoder = new TextEncoder();

if (!('encodeInto' in cachedTextEncoder)) {
    cachedTextEncoder.encodeInto = function (arg, view) {
        const buf = cachedTextEncoder.encode(arg);
        view.set(buf);
        return {
            read: arg.length,
            written: buf.length
        };
    };
}

let WASM_VECTOR_LEN = 0;

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('impurity_thermometry_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
